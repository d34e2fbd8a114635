#pragma once

// Randomized property suite for the Whitney size function, shared by the
// test suite and the command-line tool.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leafwind/plane.hpp"
#include "leafwind/whitney.hpp"

namespace leafwind {

struct PropertyGroup {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string counterexample;  ///< first failure, human readable
};

struct WhitneyPropertyReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t n = 0;
  std::vector<PropertyGroup> groups;

  bool passed() const {
    for (const auto& g : groups)
      if (g.failures) return false;
    return true;
  }
};

struct WhitneyPropertyOptions {
  std::size_t n = 32;
  std::size_t max_points = 6;  ///< 1 restricts the corpus to singletons
  double extent = 6.0;         ///< points drawn from [-extent, extent]^2
};

namespace detail {

inline std::string dump(const std::vector<Point>& pts) {
  std::ostringstream os;
  os.precision(17);
  os << '{';
  for (std::size_t k = 0; k < pts.size(); ++k) os << (k ? ", " : "") << '(' << pts[k].x << ", " << pts[k].y << ')';
  os << '}';
  return os.str();
}

inline void record(PropertyGroup& g, bool ok, const std::string& what) {
  ++g.checks;
  if (ok) return;
  if (!g.failures) g.counterexample = what;
  ++g.failures;
}

}  // namespace detail

/// Runs `trials` randomized cases of each Whitney property:
/// (i) singletons have value 0; (ii) midpoint refinement of a polyline sample
/// at spacing s raises the value by at most s + 2 tail, and duplicates change
/// nothing; (iii) subsets never exceed supersets; (iv) adding a point at
/// distance 1 grows the value by more than the summed tails; (v) moving every
/// point by at most delta changes the value by at most 2 delta + 2 tail.
inline WhitneyPropertyReport run_whitney_properties(std::size_t trials, std::uint64_t seed,
                                                    const WhitneyPropertyOptions& opt = {},
                                                    const BasePointScheme& scheme = default_scheme()) {
  WhitneyPropertyReport rep{seed, trials, opt.n, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-opt.extent, opt.extent);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, opt.max_points));
  auto random_point = [&] { return Point{coord(rng), coord(rng)}; };
  auto random_set = [&] {
    std::vector<Point> pts(count(rng));
    for (auto& p : pts) p = random_point();
    return pts;
  };
  auto value = [&](const std::vector<Point>& pts) { return mu(scheme, SampledSet(pts), opt.n).value; };
  const double tail = std::ldexp(1.0, -static_cast<int>(opt.n));

  PropertyGroup g1{"(i) singleton", 0, 0, {}};
  PropertyGroup g2{"(ii) refinement", 0, 0, {}};
  PropertyGroup g3{"(iii) monotone", 0, 0, {}};
  PropertyGroup g4{"(iv) strict growth", 0, 0, {}};
  PropertyGroup g5{"(v) Hausdorff continuity", 0, 0, {}};

  for (std::size_t t = 0; t < trials; ++t) {
    {
      const Point p = random_point();
      const double v = value({p});
      detail::record(g1, v == 0.0, detail::dump({p}) + " has value " + std::to_string(v));
    }
    {
      std::vector<Point> verts = opt.max_points == 1 ? std::vector<Point>{random_point()} : random_set();
      const double s = 0.05 + 0.45 * unit(rng);
      std::vector<Point> sample{verts.front()};
      for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
        const double len = distance(verts[k], verts[k + 1]);
        const auto pieces = static_cast<std::size_t>(std::ceil(len / s));
        for (std::size_t j = 1; j <= pieces; ++j)
          sample.push_back(verts[k] + (verts[k + 1] - verts[k]) * (static_cast<double>(j) / pieces));
      }
      std::vector<Point> refined{sample.front()};
      for (std::size_t k = 0; k + 1 < sample.size(); ++k) {
        refined.push_back(sample[k] + (sample[k + 1] - sample[k]) * 0.5);
        refined.push_back(sample[k + 1]);
      }
      const double v0 = value(sample), v1 = value(refined);
      detail::record(g2, v1 >= v0 && v1 - v0 <= s + 2 * tail,
                     detail::dump(sample) + " refined grows by " + std::to_string(v1 - v0));
      std::vector<Point> doubled = sample;
      doubled.insert(doubled.end(), sample.begin(), sample.end());
      detail::record(g2, value(doubled) == v0, detail::dump(sample) + " changes when duplicated");
    }
    {
      const std::vector<Point> a = random_set();
      std::vector<Point> b;
      for (Point p : a)
        if (unit(rng) < 0.5) b.push_back(p);
      if (b.empty()) b.push_back(a.front());
      detail::record(g3, value(b) <= value(a), detail::dump(b) + " exceeds superset " + detail::dump(a));
    }
    {
      const Point p = random_point();
      const double ang = 2 * std::numbers::pi * unit(rng);
      const Point q = p + Vector{std::cos(ang), std::sin(ang)};
      const double grow = value({p, q}) - value({p});
      detail::record(g4, grow > 2 * tail, detail::dump({p, q}) + " grows by only " + std::to_string(grow));
    }
    {
      const std::vector<Point> a = random_set();
      const double delta = 0.5 * unit(rng);
      std::vector<Point> moved;
      for (Point p : a) {
        const double ang = 2 * std::numbers::pi * unit(rng);
        moved.push_back(p + Vector{std::cos(ang), std::sin(ang)} * (delta * unit(rng)));
      }
      const double dv = std::abs(value(moved) - value(a));
      detail::record(g5, dv <= 2 * delta + 2 * tail,
                     detail::dump(a) + " moved by " + std::to_string(delta) + " changes by " + std::to_string(dv));
    }
  }
  {
    const double grow = value({{0, 0}, {1, 0}}) - value({{0, 0}});
    detail::record(g4, grow > 2 * tail, "{(0,0),(1,0)} grows by only " + std::to_string(grow));
  }
  rep.groups = {g1, g2, g3, g4, g5};
  return rep;
}

}  // namespace leafwind
