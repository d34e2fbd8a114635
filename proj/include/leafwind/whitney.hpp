#pragma once

// Whitney size function on finite samples and polylines, and the leaf-size
// function tau along forward half-leaves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "leafwind/errors.hpp"
#include "leafwind/foliation.hpp"
#include "leafwind/plane.hpp"

namespace leafwind {

/// Deterministic enumeration of dyadic-rational base points q_1, q_2, ...
///
/// Stage 0 lists the 64 unit-cell centres of [-4,4]^2. Stage s >= 1 lists
/// every dyadic point of level <= s+1 (denominator 2^level) with Chebyshev
/// radius <= 4s not listed before, grouped by level. Inside a group points go
/// in spiral order: Chebyshev ring, then angle in [0, 2pi), then norm.
/// Every dyadic point appears exactly once. Scheme version 1.
class BasePointScheme {
 public:
  static constexpr int kVersion = 1;

  /// q_i for i >= 1.
  Point at(std::size_t i) const {
    if (i == 0) throw IndexOutOfScheme(i);
    ensure(i);
    return points_[i - 1];
  }

  std::vector<Point> first(std::size_t n) const {
    ensure(n);
    return {points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(n)};
  }

 private:
  static double spiral_angle(Point p) {
    double a = std::atan2(p.y, p.x);
    return a < 0 ? a + 2 * std::numbers::pi : a;
  }
  static bool spiral_less(Point a, Point b) {
    const double ra = std::max(std::abs(a.x), std::abs(a.y));
    const double rb = std::max(std::abs(b.x), std::abs(b.y));
    if (ra != rb) return ra < rb;
    const double ta = spiral_angle(a), tb = spiral_angle(b);
    if (ta != tb) return ta < tb;
    return std::hypot(a.x, a.y) < std::hypot(b.x, b.y);
  }
  static int min_level(std::int64_t numerator, int level) {
    while (level > 0 && numerator % 2 == 0) {
      numerator /= 2;
      --level;
    }
    return level;
  }

  void ensure(std::size_t n) const {
    std::lock_guard lock(mutex_);
    if (points_.empty()) {
      std::vector<Point> s0;
      for (int j = -4; j < 4; ++j)
        for (int k = -4; k < 4; ++k) s0.push_back({j + 0.5, k + 0.5});
      std::sort(s0.begin(), s0.end(), spiral_less);
      points_ = std::move(s0);
    }
    while (points_.size() < n) {
      ++stage_;
      const int s = stage_;
      for (int level = 0; level <= s + 1; ++level) {
        const std::int64_t den = std::int64_t{1} << level;
        const std::int64_t r = 4 * s * den;
        std::vector<Point> group;
        for (std::int64_t a = -r; a <= r; ++a) {
          for (std::int64_t b = -r; b <= r; ++b) {
            if (std::max(min_level(a, level), min_level(b, level)) != level) continue;
            const Point p{static_cast<double>(a) / den, static_cast<double>(b) / den};
            // Stage 0 holds level-1 points of radius < 4; earlier stages hold
            // everything of lower stage bounds.
            if (listed_before(p, level, s)) continue;
            group.push_back(p);
          }
        }
        std::sort(group.begin(), group.end(), spiral_less);
        points_.insert(points_.end(), group.begin(), group.end());
      }
    }
  }

  /// Whether p (of minimal level `level`) was listed in a stage before s.
  static bool listed_before(Point p, int level, int s) {
    const double cheb = std::max(std::abs(p.x), std::abs(p.y));
    if (level == 1 && cheb < 4.0 && std::abs(std::fmod(p.x, 1.0)) == 0.5 &&
        std::abs(std::fmod(p.y, 1.0)) == 0.5)
      return true;
    // Stage s' >= 1 lists level <= s'+1 within radius 4s'.
    for (int sp = 1; sp < s; ++sp)
      if (level <= sp + 1 && cheb <= 4.0 * sp) return true;
    return false;
  }

  mutable std::mutex mutex_;
  mutable std::vector<Point> points_;
  mutable int stage_ = 0;
};

inline const BasePointScheme& default_scheme() {
  static const BasePointScheme scheme;
  return scheme;
}

/// m_i(p) = 1 / (1 + d(p, q_i)), for 1 <= i <= n_limit.
inline double m_i(const BasePointScheme& scheme, std::size_t i, Point p,
                  std::size_t n_limit = static_cast<std::size_t>(-1)) {
  if (i == 0 || i > n_limit) throw IndexOutOfScheme(i);
  return 1.0 / (1.0 + distance(p, scheme.at(i)));
}

/// Truncated series value with its tail bound: the true value lies in
/// [value, value + tail_bound].
struct WhitneyValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// A finite nonempty sample standing in for a compact set.
class SampledSet {
 public:
  explicit SampledSet(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw InvalidArgument("SampledSet must be nonempty");
  }
  const std::vector<Point>& points() const noexcept { return points_; }

 private:
  std::vector<Point> points_;
};

/// mu(A) truncated after N terms: sum_{i=1..N} 2^-i * (max - min of m_i on A).
inline WhitneyValue mu(const BasePointScheme& scheme, const SampledSet& a, std::size_t n) {
  if (n < 1) throw InvalidArgument("mu: N must be >= 1");
  const auto qs = scheme.first(n);
  WhitneyValue w{0.0, std::ldexp(1.0, -static_cast<int>(n))};
  for (std::size_t i = 1; i <= n; ++i) {
    double lo = 2.0, hi = -1.0;
    for (Point p : a.points()) {
      const double v = 1.0 / (1.0 + distance(p, qs[i - 1]));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    w.value += std::ldexp(hi - lo, -static_cast<int>(i));
  }
  return w;
}

inline WhitneyValue mu(const SampledSet& a, std::size_t n = 32) { return mu(default_scheme(), a, n); }

/// mu of the full polyline (all points on its segments, not only vertices).
/// The closest point of each segment to q_i is exact; the farthest is a vertex.
inline WhitneyValue mu_polyline(const BasePointScheme& scheme, std::span<const Point> poly,
                                std::size_t n) {
  if (poly.empty()) throw InvalidArgument("mu_polyline: empty polyline");
  if (n < 1) throw InvalidArgument("mu: N must be >= 1");
  const auto qs = scheme.first(n);
  WhitneyValue w{0.0, std::ldexp(1.0, -static_cast<int>(n))};
  for (std::size_t i = 1; i <= n; ++i) {
    const Point q = qs[i - 1];
    double dmin = distance(poly[0], q), dmax = dmin;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      dmax = std::max(dmax, distance(poly[k], q));
      if (k + 1 < poly.size()) dmin = std::min(dmin, point_segment_distance(q, poly[k], poly[k + 1]));
    }
    w.value += std::ldexp(1.0 / (1.0 + dmin) - 1.0 / (1.0 + dmax), -static_cast<int>(i));
  }
  return w;
}

/// Lower estimates of tau(z) = mu(forward half-leaf from z): for each arc
/// length in the increasing schedule, mu of the traced forward arc of that
/// length. Nondecreasing by construction of nested arcs.
inline std::vector<WhitneyValue> tau(const Foliation& f, Point z, std::size_t n,
                                     std::span<const double> arclen_schedule,
                                     const TraceOptions& opt = {},
                                     const BasePointScheme& scheme = default_scheme()) {
  for (std::size_t k = 1; k < arclen_schedule.size(); ++k)
    if (!(arclen_schedule[k] > arclen_schedule[k - 1]))
      throw InvalidArgument("tau: arc-length schedule must be increasing");
  std::vector<WhitneyValue> out;
  if (arclen_schedule.empty()) return out;
  if (arclen_schedule.front() < 0) throw InvalidArgument("tau: negative arc length");
  const double total = arclen_schedule.back();
  const LeafArc longest = leaf_trace_length(f, z, total, opt);
  // Arc-length parameter of each vertex: k * step, the last one possibly short.
  auto param = [&](std::size_t k) { return std::min(static_cast<double>(k) * opt.step, total); };
  for (double len : arclen_schedule) {
    std::vector<Point> prefix{z};
    for (std::size_t k = 1; k < longest.points.size(); ++k) {
      if (param(k) <= len) {
        prefix.push_back(longest.points[k]);
        continue;
      }
      const double frac = (len - param(k - 1)) / (param(k) - param(k - 1));
      if (frac > 0.0) prefix.push_back(longest.points[k - 1] + (longest.points[k] - longest.points[k - 1]) * frac);
      break;
    }
    out.push_back(mu_polyline(scheme, prefix, n));
  }
  return out;
}

}  // namespace leafwind
