#pragma once

// Index computations between two lines or orbits: the Poincare-Hopf flow
// index, the Le Roux index via the Theta lift of the displacement field, the
// foliation index of a transverse foliation, and the float pair-field oracle.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leafwind/brouwer.hpp"
#include "leafwind/errors.hpp"
#include "leafwind/foliation.hpp"
#include "leafwind/khalimsky.hpp"
#include "leafwind/plane.hpp"

namespace leafwind {

/// An index value k/2 kept in integer quarters of a turn (quarters = 2k).
class IndexValue {
 public:
  static IndexValue from_quarters(std::int64_t quarters) {
    if (quarters % 2 != 0)
      throw std::logic_error("odd quarter count " + std::to_string(quarters) + " in an index value");
    return IndexValue(quarters);
  }
  static IndexValue from_halves(std::int64_t halves) { return IndexValue(2 * halves); }

  std::int64_t quarters() const noexcept { return quarters_; }
  std::int64_t halves() const noexcept { return quarters_ / 2; }
  double value() const noexcept { return static_cast<double>(quarters_) / 4.0; }
  /// Always "p/2", e.g. "3/2", "0/2", "-4/2".
  std::string display() const { return std::to_string(halves()) + "/2"; }

  bool operator==(const IndexValue&) const = default;

 private:
  explicit IndexValue(std::int64_t q) : quarters_(q) {}
  std::int64_t quarters_;
};

/// An index value with the bookkeeping of the lift that produced it.
struct IndexResult {
  IndexValue value = IndexValue::from_quarters(0);
  double float_oracle = 0.0;  ///< real winding of the same field
  std::size_t samples = 0;
  int depth = 0;
  std::string reason;  ///< set when the value is a convention, e.g. "intersecting"
};

struct IndexOptions {
  int max_depth = 40;
  double tol_snap = 1e-6;
  int initial_intervals = 64;
  double tol_fix = 1e-3;
  double tol_leaf = 1e-4;
  double tol_line = 1e-6;  ///< straightened lines and orbits must be this close to their rows
  Box box = Box::standard();
  double leaf_step = 1.0 / 128;
  bool verify_alternative_path = false;

  LiftOptions lift(EndpointPolicy p) const { return {max_depth, tol_snap, initial_intervals, p}; }
};

namespace detail {

template <class Field>
IndexResult index_from_field(Field&& field, const IndexOptions& opt, EndpointPolicy policy,
                             LiftResult* lift_out = nullptr) {
  auto angle_at = [&](double t) {
    const Vector v = field(t);
    if (v.dx == 0.0 && v.dy == 0.0) throw ZeroVector(t);
    return std::atan2(v.dy, v.dx);
  };
  const LiftResult lift = lift_angle_path(angle_at, opt.lift(policy));
  if (lift_out) *lift_out = lift;
  IndexResult r;
  r.value = IndexValue::from_quarters(lift.difference());
  r.float_oracle = (lift.unwrapped_end - lift.unwrapped_start) / (2 * std::numbers::pi);
  r.samples = lift.samples;
  r.depth = lift.depth;
  return r;
}

inline bool on_integer_row(Point p, int row, double tol) {
  return std::abs(p.y - row) < tol && std::abs(p.x - std::nearbyint(p.x)) < tol;
}

}  // namespace detail

/// A homeomorphism in Str(g1, g2): it carries g1 onto the row y = 1 and g2
/// onto y = 2. Certified on the traced samples of both lines inside a box.
class StrMap {
 public:
  static StrMap certify(PlaneHomeo h, const OrientedLine& g1, const OrientedLine& g2,
                        const Box& box = Box::standard(), double tol = 1e-6) {
    double worst = 0.0;
    int row = 1;
    for (const OrientedLine* g : {&g1, &g2}) {
      for (Point p : g->trace(box))
        if (box.contains(p)) worst = std::max(worst, std::abs(h(p).y - row));
      ++row;
    }
    if (!(worst < tol))
      throw WitnessInvalid(h.name() + " misses the target rows by " + std::to_string(worst));
    return StrMap(std::move(h), worst);
  }

  const PlaneHomeo& h() const noexcept { return h_; }
  /// Largest row distance seen on the line samples.
  double certificate() const noexcept { return certificate_; }

 private:
  StrMap(PlaneHomeo h, double c) : h_(std::move(h)), certificate_(c) {}
  PlaneHomeo h_;
  double certificate_;
};

/// h normalizing f: h carries the two orbits onto Z x {1} and Z x {2} and
/// h f h^-1 is a model map.
class HandelWitness {
 public:
  enum class Justification { ExplicitModel, StrDaggerSeparated };

  /// Checks iterates -2..2 of both seeds against the integer rows. For
  /// StrDaggerSeparated also traces the barrier leaf of `transverse` through
  /// h^-1(0, barrier_height) and checks that h maps it to the horizontal row
  /// at that height, strictly between the orbits.
  static HandelWitness verify(PlaneHomeo h, const BrouwerMap& f, Point seed1, Point seed2,
                              Justification why, const Foliation* transverse = nullptr,
                              std::optional<double> barrier_height = std::nullopt,
                              const IndexOptions& opt = {}) {
    const Orbit o1 = orbit(f, seed1, -2, 2, {opt.tol_fix});
    const Orbit o2 = orbit(f, seed2, -2, 2, {opt.tol_fix});
    for (int n = -2; n <= 2; ++n) {
      if (!detail::on_integer_row(h(o1.at(n)), 1, opt.tol_line))
        throw WitnessInvalid("orbit 1 iterate " + std::to_string(n) + " is off Z x {1}");
      if (!detail::on_integer_row(h(o2.at(n)), 2, opt.tol_line))
        throw WitnessInvalid("orbit 2 iterate " + std::to_string(n) + " is off Z x {2}");
    }
    HandelWitness w(h, conjugate(f, h), why);
    if (why == Justification::StrDaggerSeparated) {
      if (!transverse || !barrier_height)
        throw WitnessInvalid("separated witness needs a transverse foliation and a barrier leaf");
      const double yb = *barrier_height;
      if (!(yb > 1.0 && yb < 2.0)) throw WitnessInvalid("barrier leaf is not between the rows");
      // The barrier row repels nearby leaves, so tracing it amplifies rounding.
      // Certify tangency along h^-1 of the row instead.
      double worst = 0.0;
      int inside = 0;
      const int samples = 512;
      for (int k = 0; k <= samples; ++k) {
        const double x = opt.box.xmin + (opt.box.xmax - opt.box.xmin) * k / samples;
        const Point p = h.inverse({x, yb});
        if (!opt.box.contains(p)) continue;
        ++inside;
        const Vector v = h.differential(p) * transverse->direction(p);
        worst = std::max(worst, std::abs(v.dy) / v.norm());
      }
      if (!(worst < opt.tol_line * 10))
        throw WitnessInvalid("barrier leaf drifts by " + std::to_string(worst));
      if (inside < samples / 2) throw WitnessInvalid("barrier leaf does not cross the box");
      w.barrier_ = yb;
      w.barrier_error_ = worst;
    }
    return w;
  }

  const PlaneHomeo& h() const noexcept { return h_; }
  const BrouwerMap& normalized_map() const noexcept { return map_; }
  Justification justification() const noexcept { return why_; }
  std::optional<double> barrier_height() const noexcept { return barrier_; }
  double barrier_error() const noexcept { return barrier_error_; }

 private:
  HandelWitness(PlaneHomeo h, BrouwerMap m, Justification why)
      : h_(std::move(h)), map_(std::move(m)), why_(why) {}
  PlaneHomeo h_;
  BrouwerMap map_;
  Justification why_;
  std::optional<double> barrier_;
  double barrier_error_ = 0.0;
};

inline std::string to_string(HandelWitness::Justification j) {
  return j == HandelWitness::Justification::ExplicitModel ? "ExplicitModel" : "StrDaggerSeparated";
}

/// Winding of h_* X along a path joining two leaves that h straightens to
/// horizontals. The pushed field must be horizontal at both ends.
inline IndexResult poincare_hopf_index(const VectorField& x, const PlaneHomeo& straightener,
                                       const PolyPath& path, const IndexOptions& opt = {}) {
  auto pushed = [&](double t) {
    const Point p = path.at(t);
    return straightener.differential(p) * x(p);
  };
  // the pushed field must be horizontal at both ends, not merely on an axis
  for (double t : {0.0, 1.0}) {
    const Vector v = pushed(t);
    if (std::abs(std::atan2(v.dy, v.dx * (v.dx < 0 ? -1.0 : 1.0))) > opt.tol_snap)
      throw EndpointNotOnAxisClass("pushed field is not horizontal at t = " + std::to_string(t));
  }
  return detail::index_from_field(pushed, opt, EndpointPolicy::RequireAxis);
}

/// Theta lift of the displacement F(a(t)) - a(t) of the normalized map
/// F = h f h^-1 along a path from x1 in Z x {1} to x2 in Z x {2}.
inline IndexResult leroux_index_via_theta(const HandelWitness& witness, Point x1, Point x2,
                                          const PolyPath& path, const IndexOptions& opt = {}) {
  if (!detail::on_integer_row(x1, 1, opt.tol_line) || !detail::on_integer_row(x2, 2, opt.tol_line))
    throw InvalidArgument("Le Roux endpoints must lie on Z x {1} and Z x {2}");
  if (distance(path.front(), x1) > opt.tol_line || distance(path.back(), x2) > opt.tol_line)
    throw InvalidArgument("Le Roux path must run from x1 to x2");
  const BrouwerMap& f = witness.normalized_map();
  auto run = [&](const PolyPath& a) {
    return detail::index_from_field(
        [&](double t) { return displacement(f, a.at(t), opt.tol_fix); }, opt,
        EndpointPolicy::RequireAxis);
  };
  IndexResult r = run(path);
  if (opt.verify_alternative_path) {
    const Point mid = path.at(0.5) + Vector{0.37, 0.0};
    const IndexResult alt = run(PolyPath({x1, mid, x2}));
    if (!(alt.value == r.value))
      throw WitnessInvalid("index depends on the path: " + r.value.display() + " vs " +
                           alt.value.display());
  }
  return r;
}

namespace detail {

inline void check_transverse(const Foliation& f, const OrientedLine& g, const Box& box, const char* which) {
  std::vector<Point> inside;
  for (Point p : g.trace(box))
    if (box.contains(p)) inside.push_back(p);
  if (inside.size() < 2) throw NotTransverse(std::string(which) + " misses the working box");
  if (!is_positively_transverse(f, inside))
    throw NotTransverse(std::string(which) + " is not positively transverse to " + f.name());
}

inline void check_on_line(const OrientedLine& g, Point p, const Box& box, double tol, const char* which) {
  const auto v = g.trace(box.including(p));
  if (project_onto(v, p).distance > tol)
    throw InvalidArgument(std::string("path endpoint is not on ") + which);
}

}  // namespace detail

/// Ind(F, g1, g2): quarter of the Theta difference of the pair field
/// h(a'(t)) - h(a(t)), a' pushed forward by eps along the leaves. Zero by
/// convention when the lines meet.
inline IndexResult foliation_index(const Foliation& f, const OrientedLine& g1, const OrientedLine& g2,
                                   const StrMap& h, double eps, const PolyPath& path,
                                   const IndexOptions& opt = {}) {
  if (lines_intersect(g1, g2, opt.box)) {
    IndexResult r;
    r.reason = "intersecting";
    return r;
  }
  if (!(eps >= 2 * opt.tol_leaf)) throw InvalidArgument("eps must exceed the leaf gray zone");
  detail::check_transverse(f, g1, opt.box, "g1");
  detail::check_transverse(f, g2, opt.box, "g2");
  detail::check_on_line(g1, path.front(), opt.box, opt.tol_leaf, "g1");
  detail::check_on_line(g2, path.back(), opt.box, opt.tol_leaf, "g2");
  auto field = [&](double t) {
    const Point a = path.at(t);
    return h.h()(forward_on_leaf(f, a, eps, opt.leaf_step)) - h.h()(a);
  };
  LiftResult lift;
  IndexResult r = detail::index_from_field(field, opt, EndpointPolicy::SnapIfNear, &lift);
  if (!is_odd(mod4(lift.theta_start)))
    throw EndpointEvenClass("pushed start point lies on the horizontal through x1");
  if (!is_odd(mod4(lift.theta_end)))
    throw EndpointEvenClass("pushed end point lies on the horizontal through x2");
  return r;
}

/// Real winding of the same pair field; agrees with foliation_index / 2 in halves.
inline double intuitive_index_float(const Foliation& f, const OrientedLine& g1, const OrientedLine& g2,
                                    const StrMap& h, double eps, const PolyPath& path,
                                    const IndexOptions& opt = {}) {
  if (lines_intersect(g1, g2, opt.box)) return 0.0;
  detail::check_transverse(f, g1, opt.box, "g1");
  detail::check_transverse(f, g2, opt.box, "g2");
  return winding_number(
      [&](double t) {
        const Point a = path.at(t);
        return h.h()(forward_on_leaf(f, a, eps, opt.leaf_step)) - h.h()(a);
      },
      opt.initial_intervals + 1, opt.max_depth);
}

}  // namespace leafwind
