#pragma once

// Brouwer homeomorphisms: explicit maps, flow time-one maps, compactly
// supported perturbations rel orbits, orbits, and Brouwer-line checks.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leafwind/errors.hpp"
#include "leafwind/foliation.hpp"
#include "leafwind/integrate.hpp"
#include "leafwind/plane.hpp"

namespace leafwind {

struct FixedPointCheck {
  Box box = Box::standard();
  int grid = 33;  ///< grid x grid samples
  double tol_fix = 1e-3;
};

namespace detail {

/// Solves f(p) = q from `guess` by damped Gauss-Newton steps with a
/// finite-difference Jacobian. A small Levenberg term keeps the step defined
/// where f contracts one direction below double precision. Returns the best
/// iterate found.
template <class F>
Point newton_preimage(const F& f, Point q, Point guess, double tol = 1e-13, int max_iter = 16) {
  Point p = guess;
  Vector r = f(p) - q;
  for (int it = 0; it < max_iter && r.norm() > tol; ++it) {
    const double d = 1e-7 * std::max(1.0, std::max(std::abs(p.x), std::abs(p.y)));
    const Point fp = q + r;
    const Vector cx = (f(Point{p.x + d, p.y}) - fp) * (1.0 / d);
    const Vector cy = (f(Point{p.x, p.y + d}) - fp) * (1.0 / d);
    // normal equations (J^T J + mu I) s = J^T r
    const double a = dot(cx, cx), b = dot(cx, cy), c = dot(cy, cy);
    const double mu = 1e-12 * (a + c);
    const double gx = dot(cx, r), gy = dot(cy, r);
    const double det = (a + mu) * (c + mu) - b * b;
    if (!(det > 0.0) || !std::isfinite(det)) break;
    const Vector step{((c + mu) * gx - b * gy) / det, ((a + mu) * gy - b * gx) / det};
    bool improved = false;
    for (double damp = 1.0; damp > 1e-3; damp *= 0.5) {
      const Point cand = p - step * damp;
      const Vector rc = f(cand) - q;
      if (rc.norm() < r.norm()) {
        p = cand;
        r = rc;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return p;
}

}  // namespace detail

/// A fixed-point-free orientation-preserving plane map with its inverse.
/// Fixed-point freeness is certified on a sample grid only.
class BrouwerMap {
 public:
  enum class Kind { Explicit, FlowTimeOne, Perturbed };
  using Map = std::function<Point(Point)>;

  Point operator()(Point p) const { return forward_(p); }
  Point forward(Point p) const { return forward_(p); }
  Point inverse(Point p) const { return inverse_(p); }
  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  /// Generating unit field of a FlowTimeOne map (or of the base of a perturbation).
  const std::optional<VectorField>& field() const noexcept { return field_; }
  double step() const noexcept { return step_; }

  static BrouwerMap explicit_map(Map forward, Map inverse, std::string name) {
    BrouwerMap m;
    m.kind_ = Kind::Explicit;
    m.forward_ = std::move(forward);
    m.inverse_ = std::move(inverse);
    m.name_ = std::move(name);
    return m;
  }

  static BrouwerMap time_one(VectorField field, double step, std::string name) {
    if (!(step > 0.0)) throw InvalidArgument("flow_time_one: step must be positive");
    BrouwerMap m;
    m.kind_ = Kind::FlowTimeOne;
    m.forward_ = [field, step](Point p) { return integrate(field, p, 1.0, step); };
    // The integrator is not time-reversible; polish the backward solution so
    // that the inverse is the inverse of the discrete forward map.
    m.inverse_ = [field, step](Point q) {
      const auto fwd = [&](Point p) { return integrate(field, p, 1.0, step); };
      return detail::newton_preimage(fwd, q, integrate(field, q, -1.0, step));
    };
    m.field_ = std::move(field);
    m.step_ = step;
    m.name_ = std::move(name);
    return m;
  }

  static BrouwerMap perturbed(const BrouwerMap& base, Map forward, Map inverse, std::string name) {
    BrouwerMap m;
    m.kind_ = Kind::Perturbed;
    m.forward_ = std::move(forward);
    m.inverse_ = std::move(inverse);
    m.field_ = base.field_;
    m.step_ = base.step_;
    m.name_ = std::move(name);
    return m;
  }

 private:
  BrouwerMap() = default;
  Kind kind_ = Kind::Explicit;
  Map forward_;
  Map inverse_;
  std::optional<VectorField> field_;
  double step_ = 0.0;
  std::string name_;
};

inline std::vector<Point> grid_points(const Box& box, int n) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pts.push_back({box.xmin + (box.xmax - box.xmin) * i / (n - 1.0),
                     box.ymin + (box.ymax - box.ymin) * j / (n - 1.0)});
  return pts;
}

/// f(z) - z; never shorter than tol_fix for a certified map.
inline Vector displacement(const BrouwerMap& f, Point z, double tol_fix = 1e-3) {
  const Vector v = f(z) - z;
  if (v.norm() < tol_fix)
    throw FixedPointSuspected("displacement " + std::to_string(v.norm()) + " at (" +
                              std::to_string(z.x) + ", " + std::to_string(z.y) + ")");
  return v;
}

/// Smallest |f(z) - z| over the grid; throws when it drops below tol_fix.
inline double certify_fixed_point_free(const BrouwerMap& f, const FixedPointCheck& chk = {}) {
  double least = std::numeric_limits<double>::infinity();
  for (Point z : grid_points(chk.box, chk.grid)) least = std::min(least, displacement(f, z, chk.tol_fix).norm());
  return least;
}

/// T(x, y) = (x + 1, y).
inline BrouwerMap translation_T() {
  return BrouwerMap::explicit_map([](Point p) { return Point{p.x + 1.0, p.y}; },
                                  [](Point p) { return Point{p.x - 1.0, p.y}; }, "T");
}

/// Time-one map of the flow of a unit field, RK4 with fixed step; the inverse
/// integrates backward in time.
inline BrouwerMap flow_time_one(VectorField field, double step = 1.0 / 64,
                                std::optional<FixedPointCheck> check = FixedPointCheck{},
                                std::string name = "flow_time_one") {
  BrouwerMap m = BrouwerMap::time_one(std::move(field), step, std::move(name));
  if (check) certify_fixed_point_free(m, *check);
  return m;
}

/// The Reeb model: time-one map of band_spiral(1).
inline BrouwerMap reeb_R(double step = 1.0 / 64) {
  return flow_time_one(BandSpiral(1).vector_field(), step, FixedPointCheck{}, "R");
}

/// h o f o h^-1.
inline BrouwerMap conjugate(const BrouwerMap& f, const PlaneHomeo& h) {
  BrouwerMap m = BrouwerMap::explicit_map([f, h](Point p) { return h(f(h.inverse(p))); },
                                          [f, h](Point p) { return h(f.inverse(h.inverse(p))); },
                                          h.name() + "*" + f.name() + "*" + h.name() + "^-1");
  return m;
}

/// Cached iterates f^n(seed) for n in [n_min, n_max].
class Orbit {
 public:
  Orbit(Point seed, int n_min, int n_max, std::vector<Point> points)
      : seed_(seed), n_min_(n_min), n_max_(n_max), points_(std::move(points)) {}

  Point seed() const noexcept { return seed_; }
  int n_min() const noexcept { return n_min_; }
  int n_max() const noexcept { return n_max_; }
  Point at(int n) const {
    if (n < n_min_ || n > n_max_) throw InvalidArgument("orbit iterate out of cached range");
    return points_[static_cast<std::size_t>(n - n_min_)];
  }
  const std::vector<Point>& points() const noexcept { return points_; }

 private:
  Point seed_;
  int n_min_, n_max_;
  std::vector<Point> points_;
};

struct OrbitOptions {
  double tol_fix = 1e-3;
  /// When set, the orbit must leave this box in both time directions within
  /// escape_iterations steps.
  std::optional<Box> escape_box;
  int escape_iterations = 64;
};

inline Orbit orbit(const BrouwerMap& f, Point seed, int n_min, int n_max, const OrbitOptions& opt = {}) {
  if (n_min > 0 || n_max < 0) throw InvalidArgument("orbit range must contain 0");
  std::vector<Point> back, fwd{seed};
  Point p = seed;
  for (int n = 1; n <= n_max; ++n) {
    const Point q = f(p);
    if (distance(p, q) < opt.tol_fix) throw FixedPointSuspected("orbit stalls at iterate " + std::to_string(n));
    fwd.push_back(p = q);
  }
  p = seed;
  for (int n = -1; n >= n_min; --n) {
    const Point q = f.inverse(p);
    if (distance(p, q) < opt.tol_fix) throw FixedPointSuspected("orbit stalls at iterate " + std::to_string(n));
    back.push_back(p = q);
  }
  if (opt.escape_box) {
    for (int dir : {1, -1}) {
      Point q = seed;
      int k = 0;
      for (; k < opt.escape_iterations && opt.escape_box->contains(q); ++k) q = dir > 0 ? f(q) : f.inverse(q);
      if (opt.escape_box->contains(q))
        throw NonEscaping(std::string(dir > 0 ? "forward" : "backward") + " orbit stays in the box");
    }
  }
  std::vector<Point> all(back.rbegin(), back.rend());
  all.insert(all.end(), fwd.begin(), fwd.end());
  return Orbit(seed, n_min, n_max, std::move(all));
}

struct BrouwerLineOptions {
  double tol_leaf = 1e-4;
  double offset = 0.05;  ///< normal offset of the off-leaf samples
  TraceOptions trace{};
};

/// Sampled check of f(closure of L(lambda)) in L(lambda) and
/// f^-1(closure of R(lambda)) in R(lambda) for the leaf lambda through
/// leaf_seed. Samples n_samples base points along the part of lambda inside
/// box, and tests each base point plus its left and right normal offsets.
inline bool brouwer_line_check(const BrouwerMap& f, const Foliation& fol, Point leaf_seed,
                               const Box& box, int n_samples, const BrouwerLineOptions& opt = {}) {
  const TracedLeaf leaf = trace_full_leaf(fol, leaf_seed, box.padded(3.0), opt.trace);
  std::vector<std::size_t> inside;
  for (std::size_t k = 0; k + 1 < leaf.points.size(); ++k)
    if (box.contains(leaf.points[k])) inside.push_back(k);
  if (inside.empty() || n_samples < 1) throw InvalidArgument("brouwer_line_check: leaf misses the box");
  for (int s = 0; s < n_samples; ++s) {
    const std::size_t k = inside[inside.size() * static_cast<std::size_t>(s) / static_cast<std::size_t>(n_samples)];
    const Point p = leaf.points[k];
    const Vector normal = rotate_left(normalized(leaf.points[k + 1] - p));
    const Point left = p + normal * opt.offset;
    const Point right = p - normal * opt.offset;
    if (classify_side(leaf.points, left, opt.tol_leaf).side != LineSide::Left) continue;
    if (classify_side(leaf.points, right, opt.tol_leaf).side != LineSide::Right) continue;
    for (Point w : {p, left})
      if (classify_side(leaf.points, f(w), opt.tol_leaf).side != LineSide::Left) return false;
    for (Point w : {p, right})
      if (classify_side(leaf.points, f.inverse(w), opt.tol_leaf).side != LineSide::Right) return false;
  }
  return true;
}

struct Bump {
  Point center;
  double radius = 0.1;
  Vector vector{};

  /// Radial falloff (1 - (r/R)^2)^2 inside the disk, zero outside.
  double weight(Point p) const noexcept {
    const double r2 = (p - center).norm() / radius;
    if (r2 >= 1.0) return 0.0;
    const double u = 1.0 - r2 * r2;
    return u * u;
  }
  Point apply(Point p, double s = 1.0) const noexcept { return p + vector * (s * weight(p)); }
  /// Inverse of apply by fixed-point iteration (a contraction for small bumps).
  Point unapply(Point q, double s = 1.0) const noexcept {
    Point p = q;
    for (int k = 0; k < 200; ++k) {
      const Point next = q - vector * (s * weight(p));
      if (distance(next, p) < 1e-15) return next;
      p = next;
    }
    return p;
  }
};

struct PerturbOptions {
  double orbit_margin = 0.05;
  double tol_fix = 1e-3;
  int disk_grid = 25;
};

/// f followed by a compactly supported bump, identity outside the disk. The
/// bump disk must avoid every protected orbit point by orbit_margin, and the
/// isotopy s -> bump_s o f must stay fixed-point free at s in {0, 1/4, ..., 1}.
inline BrouwerMap perturb_rel_orbits(const BrouwerMap& f, Point bump_center, double bump_radius,
                                     Vector bump_vector, std::span<const Orbit> protected_orbits,
                                     const PerturbOptions& opt = {}) {
  if (!(bump_radius > 0.0)) throw InvalidArgument("bump radius must be positive");
  // Lipschitz constant of the falloff is 8/(3*sqrt(3)) / R; keep the bump a
  // contraction-perturbation of the identity.
  if (bump_vector.norm() * 1.5397 / bump_radius >= 0.5)
    throw InvalidArgument("bump too strong for its radius");
  const Bump bump{bump_center, bump_radius, bump_vector};
  for (const Orbit& o : protected_orbits)
    for (Point p : o.points())
      if (distance(p, bump_center) < bump_radius + opt.orbit_margin)
        throw OrbitTouched("bump disk reaches orbit point (" + std::to_string(p.x) + ", " +
                           std::to_string(p.y) + ")");
  const Box disk{bump_center.x - bump_radius, bump_center.x + bump_radius,
                 bump_center.y - bump_radius, bump_center.y + bump_radius};
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (Point w : grid_points(disk, opt.disk_grid)) {
      if (bump.weight(w) == 0.0) continue;
      const Point z = f.inverse(w);
      if (distance(bump.apply(w, s), z) < opt.tol_fix)
        throw FixedPointSuspected("isotopy parameter " + std::to_string(s));
    }
  }
  return BrouwerMap::perturbed(
      f, [f, bump](Point p) { return bump.apply(f(p)); },
      [f, bump](Point p) { return f.inverse(bump.unapply(p)); }, f.name() + "+bump");
}

}  // namespace leafwind
