#pragma once

// Oriented non-singular plane foliations: leaf tracing, side classification,
// the topological angle function, pushforward under plane homeomorphisms,
// and the standard example foliations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "leafwind/errors.hpp"
#include "leafwind/integrate.hpp"
#include "leafwind/khalimsky.hpp"
#include "leafwind/plane.hpp"

namespace leafwind {

using VectorField = std::function<Vector(Point)>;
using ScalarField = std::function<double(Point)>;

struct Matrix2 {
  double a = 1, b = 0, c = 0, d = 1;  // [[a b] [c d]]
  Vector operator*(Vector v) const noexcept { return {a * v.dx + b * v.dy, c * v.dx + d * v.dy}; }
  double det() const noexcept { return a * d - b * c; }
};

/// An orientation-preserving plane homeomorphism given by explicit forward and
/// inverse maps. The differential is optional; central differences are used
/// when it is absent.
class PlaneHomeo {
 public:
  using Map = std::function<Point(Point)>;
  using Differential = std::function<Matrix2(Point)>;

  PlaneHomeo(Map forward, Map inverse, std::string name, Differential differential = {})
      : forward_(std::move(forward)),
        inverse_(std::move(inverse)),
        differential_(std::move(differential)),
        name_(std::move(name)) {}

  Point operator()(Point p) const { return forward_(p); }
  Point forward(Point p) const { return forward_(p); }
  Point inverse(Point p) const { return inverse_(p); }
  const std::string& name() const noexcept { return name_; }

  Matrix2 differential(Point p) const {
    if (differential_) return differential_(p);
    constexpr double h = 1e-6;
    const Vector ex = (forward_(p + Vector{h, 0}) - forward_(p - Vector{h, 0})) * (0.5 / h);
    const Vector ey = (forward_(p + Vector{0, h}) - forward_(p - Vector{0, h})) * (0.5 / h);
    return {ex.dx, ey.dx, ex.dy, ey.dy};
  }

  PlaneHomeo inverted() const {
    Differential dinv;
    if (differential_) {
      dinv = [fwd = differential_, inv = inverse_](Point p) {
        const Matrix2 m = fwd(inv(p));
        const double det = m.det();
        return Matrix2{m.d / det, -m.b / det, -m.c / det, m.a / det};
      };
    }
    return PlaneHomeo(inverse_, forward_, name_ + "^-1", std::move(dinv));
  }

  /// this o other
  PlaneHomeo after(const PlaneHomeo& other) const {
    Differential d;
    if (differential_ && other.differential_) {
      d = [outer = differential_, inner = other.differential_, g = other.forward_](Point p) {
        const Matrix2 o = outer(g(p)), i = inner(p);
        return Matrix2{o.a * i.a + o.b * i.c, o.a * i.b + o.b * i.d, o.c * i.a + o.d * i.c,
                       o.c * i.b + o.d * i.d};
      };
    }
    return PlaneHomeo([f = forward_, g = other.forward_](Point p) { return f(g(p)); },
                      [fi = inverse_, gi = other.inverse_](Point p) { return gi(fi(p)); },
                      name_ + "*" + other.name_, std::move(d));
  }

  /// max |forward(inverse(p)) - p| and |inverse(forward(p)) - p| over samples.
  double inverse_error(std::span<const Point> samples) const {
    double e = 0.0;
    for (Point p : samples) {
      e = std::max(e, distance(forward_(inverse_(p)), p));
      e = std::max(e, distance(inverse_(forward_(p)), p));
    }
    return e;
  }

  /// Orientation spot check: small positively oriented triangles stay positive.
  bool preserves_orientation(std::span<const Point> samples, double size = 1e-3) const {
    for (Point p : samples) {
      const Point a = forward_(p), b = forward_(p + Vector{size, 0}), c = forward_(p + Vector{0, size});
      if (!(cross(b - a, c - a) > 0.0)) return false;
    }
    return true;
  }

  static PlaneHomeo identity() {
    return PlaneHomeo([](Point p) { return p; }, [](Point p) { return p; }, "identity",
                      [](Point) { return Matrix2{}; });
  }
  static PlaneHomeo translation(Vector v) {
    return PlaneHomeo([v](Point p) { return p + v; }, [v](Point p) { return p - v; },
                      "translation", [](Point) { return Matrix2{}; });
  }
  /// (x, y) -> (x + c*y, y); preserves every horizontal line.
  static PlaneHomeo shear_x(double c) {
    return PlaneHomeo([c](Point p) { return Point{p.x + c * p.y, p.y}; },
                      [c](Point p) { return Point{p.x - c * p.y, p.y}; },
                      "shear_x(" + std::to_string(c) + ")",
                      [c](Point) { return Matrix2{1, c, 0, 1}; });
  }
  /// (x, y) -> (x, y + beta*sin x); bends horizontals into sine waves.
  static PlaneHomeo bend(double beta) {
    return PlaneHomeo([beta](Point p) { return Point{p.x, p.y + beta * std::sin(p.x)}; },
                      [beta](Point p) { return Point{p.x, p.y - beta * std::sin(p.x)}; },
                      "bend(" + std::to_string(beta) + ")",
                      [beta](Point p) { return Matrix2{1, 0, beta * std::cos(p.x), 1}; });
  }
  /// Straightens the bent horizontals y = c + beta*sin x back to y = c.
  static PlaneHomeo strip_straightener(double beta) {
    PlaneHomeo h = bend(beta).inverted();
    h.name_ = "strip_straightener(" + std::to_string(beta) + ")";
    return h;
  }
  /// Rotation by pi about `c`.
  static PlaneHomeo half_turn(Point c) {
    auto f = [c](Point p) { return Point{2 * c.x - p.x, 2 * c.y - p.y}; };
    return PlaneHomeo(f, f, "half_turn", [](Point) { return Matrix2{-1, 0, 0, -1}; });
  }

 private:
  Map forward_;
  Map inverse_;
  Differential differential_;
  std::string name_;
};

/// An oriented non-singular foliation of the plane, either as the integral
/// curves of a unit vector field or as the level sets of a first integral H
/// oriented by J grad H (J = rotation by +90 degrees). With that orientation
/// the left side of a leaf is {H < H(z)}.
class Foliation {
 public:
  enum class Kind { FirstIntegral, UnitField };

  static Foliation unit_field(VectorField field, std::string name) {
    Foliation f;
    f.kind_ = Kind::UnitField;
    f.field_ = std::move(field);
    f.name_ = std::move(name);
    return f;
  }

  static Foliation first_integral(ScalarField h, VectorField gradient, std::string name) {
    Foliation f;
    f.kind_ = Kind::FirstIntegral;
    f.level_ = std::move(h);
    f.field_ = [g = std::move(gradient)](Point p) { return normalized(rotate_left(g(p))); };
    f.name_ = std::move(name);
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  /// Unit tangent of the leaf through p, along its orientation.
  Vector direction(Point p) const { return field_(p); }
  /// First-integral value; only meaningful for Kind::FirstIntegral.
  double level(Point p) const { return level_(p); }
  const VectorField& field() const noexcept { return field_; }

 private:
  Foliation() = default;
  Kind kind_ = Kind::UnitField;
  VectorField field_;
  ScalarField level_;
  std::string name_;
};

enum class LeafDirection { Forward, Backward };

/// {forward on leaf, left, backward on leaf, right}, in bijection with
/// {0, 1, 2, -1} of Z/4Z.
enum class SideClass { OnLeafForward, Left, OnLeafBackward, Right };

constexpr KClass to_kclass(SideClass s) noexcept {
  switch (s) {
    case SideClass::OnLeafForward: return KClass::Zero;
    case SideClass::Left: return KClass::One;
    case SideClass::OnLeafBackward: return KClass::Two;
    case SideClass::Right: return KClass::MinusOne;
  }
  return KClass::Zero;
}

constexpr SideClass to_side(KClass k) noexcept {
  switch (k) {
    case KClass::Zero: return SideClass::OnLeafForward;
    case KClass::One: return SideClass::Left;
    case KClass::Two: return SideClass::OnLeafBackward;
    case KClass::MinusOne: return SideClass::Right;
  }
  return SideClass::OnLeafForward;
}

struct TraceOptions {
  double step = 1.0 / 128;
  std::size_t max_steps = 10000;
  double margin = 0.2;  ///< relative inflation of the exit box
  double max_turn = 0.5;  ///< radians the field may turn across one step
};

struct LeafArc {
  Point base;
  std::vector<Point> points;  ///< points.front() == base, spacing = step (arc length)
  LeafDirection direction = LeafDirection::Forward;

  PolyPath arc() const { return PolyPath(points); }
};

namespace detail {

inline Point leaf_step(const Foliation& f, Point p, double h) {
  return rk4_step([&f](Point q) { return f.direction(q); }, p, h);
}

}  // namespace detail

/// Follows the leaf through z (forward or backward) with fixed RK4 steps until
/// it leaves `box` inflated by `opt.margin`.
inline LeafArc leaf_trace(const Foliation& f, Point z, LeafDirection dir,
                          const Box& box = Box::standard(), const TraceOptions& opt = {}) {
  if (!(opt.step > 0.0)) throw InvalidArgument("leaf_trace: step must be positive");
  const Box exit_box = box.inflated(opt.margin);
  const double h = dir == LeafDirection::Forward ? opt.step : -opt.step;
  LeafArc arc{z, {z}, dir};
  Point p = z;
  Vector prev = f.direction(p);
  for (std::size_t k = 0; k < opt.max_steps; ++k) {
    if (!exit_box.contains(p)) return arc;
    p = detail::leaf_step(f, p, h);
    const Vector cur = f.direction(p);
    if (std::abs(std::atan2(cross(prev, cur), dot(prev, cur))) > opt.max_turn)
      throw StepTooLarge("leaf turns more than " + std::to_string(opt.max_turn) +
                         " rad across one step near (" + std::to_string(p.x) + ", " +
                         std::to_string(p.y) + ")");
    prev = cur;
    arc.points.push_back(p);
  }
  if (!exit_box.contains(p)) return arc;
  throw BoxNeverExited(opt.max_steps);
}

/// Traces the leaf through z along arc length `length` (forward if positive).
inline LeafArc leaf_trace_length(const Foliation& f, Point z, double length,
                                 const TraceOptions& opt = {}) {
  const LeafDirection dir = length < 0 ? LeafDirection::Backward : LeafDirection::Forward;
  const double total = std::abs(length);
  const double sgn = length < 0 ? -1.0 : 1.0;
  LeafArc arc{z, {z}, dir};
  const auto full = static_cast<std::size_t>(std::floor(total / opt.step));
  Point p = z;
  for (std::size_t k = 0; k < full; ++k) {
    p = detail::leaf_step(f, p, sgn * opt.step);
    arc.points.push_back(p);
  }
  const double rest = total - static_cast<double>(full) * opt.step;
  if (rest > 1e-12 * std::max(1.0, total)) arc.points.push_back(detail::leaf_step(f, p, sgn * rest));
  return arc;
}

/// The point at arc length eps along the forward leaf through z.
inline Point forward_on_leaf(const Foliation& f, Point z, double eps, double step = 1.0 / 128) {
  if (!(eps > 0.0)) throw InvalidArgument("forward_on_leaf: eps must be positive");
  return integrate([&f](Point q) { return f.direction(q); }, z, eps, step);
}

/// Full leaf through z clipped to a box, as one polyline oriented along the
/// leaf, together with the index of z in it.
struct TracedLeaf {
  std::vector<Point> points;
  std::size_t base_index = 0;
};

inline TracedLeaf trace_full_leaf(const Foliation& f, Point z, const Box& box,
                                  const TraceOptions& opt = {}) {
  const LeafArc fwd = leaf_trace(f, z, LeafDirection::Forward, box, opt);
  const LeafArc bwd = leaf_trace(f, z, LeafDirection::Backward, box, opt);
  TracedLeaf t;
  t.points.assign(bwd.points.rbegin(), bwd.points.rend());
  t.base_index = t.points.size() - 1;
  t.points.insert(t.points.end(), fwd.points.begin() + 1, fwd.points.end());
  return t;
}

enum class LineSide { Left, On, Right };

struct SideResult {
  LineSide side = LineSide::On;
  PolylineProjection foot;
};

/// Classifies p against an oriented polyline: On within tol_leaf, an
/// AmbiguousSide error inside [tol_leaf, 2 tol_leaf), otherwise by the sign of
/// the cross product at the nearest point.
inline SideResult classify_side(std::span<const Point> line, Point p, double tol_leaf) {
  SideResult r;
  r.foot = project_onto(line, p);
  if (r.foot.distance < tol_leaf) {
    r.side = LineSide::On;
    return r;
  }
  if (r.foot.distance < 2 * tol_leaf) throw AmbiguousSide(r.foot.distance);
  const std::size_t k = r.foot.segment;
  Vector tangent = line[k + 1] - line[k];
  // Foot at a shared vertex: average the two adjacent directions.
  if (r.foot.fraction >= 1.0 && k + 2 < line.size())
    tangent = normalized(tangent) + normalized(line[k + 2] - line[k + 1]);
  else if (r.foot.fraction <= 0.0 && k > 0)
    tangent = normalized(tangent) + normalized(line[k] - line[k - 1]);
  r.side = cross(tangent, p - r.foot.foot) > 0.0 ? LineSide::Left : LineSide::Right;
  return r;
}

struct ThetaOptions {
  Box box = Box::standard();
  double tol_leaf = 1e-4;
  TraceOptions trace{};
};

/// Topological angle function: the position of zp relative to z and the leaf
/// through z, as a class in Z/4Z.
inline KClass theta_dot(const Foliation& f, Point z, Point zp, const ThetaOptions& opt = {}) {
  if (z == zp) throw DiagonalPoint();
  const Box box = opt.box.including(z).including(zp);
  if (f.kind() == Foliation::Kind::FirstIntegral) {
    const double dh = f.level(zp) - f.level(z);
    if (std::abs(dh) >= opt.tol_leaf) {
      if (std::abs(dh) < 2 * opt.tol_leaf) throw AmbiguousSide(std::abs(dh));
      return dh < 0 ? KClass::One : KClass::MinusOne;
    }
    const TracedLeaf leaf = trace_full_leaf(f, z, box, opt.trace);
    const auto foot = project_onto(leaf.points, zp);
    const double pos = static_cast<double>(foot.segment) + foot.fraction;
    return pos > static_cast<double>(leaf.base_index) ? KClass::Zero : KClass::Two;
  }
  const TracedLeaf leaf = trace_full_leaf(f, z, box, opt.trace);
  const SideResult s = classify_side(leaf.points, zp, opt.tol_leaf);
  switch (s.side) {
    case LineSide::Left: return KClass::One;
    case LineSide::Right: return KClass::MinusOne;
    case LineSide::On: {
      const double pos = static_cast<double>(s.foot.segment) + s.foot.fraction;
      return pos > static_cast<double>(leaf.base_index) ? KClass::Zero : KClass::Two;
    }
  }
  return KClass::Zero;
}

/// theta_dot of the pushed foliation hF at (w, wp), evaluated through the
/// inverse: theta_dot(F, h^-1 w, h^-1 wp). Leaves of hF are never traced.
inline KClass pushforward_theta(const Foliation& f, const PlaneHomeo& h, Point w, Point wp,
                                const ThetaOptions& opt = {}) {
  if (w == wp) throw DiagonalPoint();
  return theta_dot(f, h.inverse(w), h.inverse(wp), opt);
}

/// The foliation hF as a unit field: pushed tangent Dh * X at h^-1(p).
inline Foliation push_forward(const Foliation& f, const PlaneHomeo& h) {
  return Foliation::unit_field(
      [f, h](Point p) {
        const Point q = h.inverse(p);
        return normalized(h.differential(q) * f.direction(q));
      },
      f.name() + "@" + h.name());
}

/// Sampled positive transversality: cross(X(gamma), gamma') > 0 at both ends
/// of every segment of the polyline.
inline bool is_positively_transverse(const Foliation& f, std::span<const Point> path) {
  if (path.size() < 2) throw InvalidArgument("transversality check needs two points");
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Vector t = path[k + 1] - path[k];
    if (t.dx == 0.0 && t.dy == 0.0) throw ZeroTangent();
    if (!(cross(f.direction(path[k]), t) > 0.0) || !(cross(f.direction(path[k + 1]), t) > 0.0))
      return false;
  }
  return true;
}

inline bool is_positively_transverse(const Foliation& f, const PolyPath& path) {
  return is_positively_transverse(f, std::span<const Point>(path.vertices()));
}

/// Leaves are the integral curves of -JX, oriented by -JX. Flow lines of X
/// cross them from right to left.
inline Foliation orthogonal_foliation(const VectorField& x, std::string name = "orthogonal") {
  return Foliation::unit_field(
      [x](Point p) {
        const Vector v = x(p);
        return Vector{v.dy, -v.dx};
      },
      std::move(name));
}

/// The traced integral curve of X through z as an oriented line.
inline OrientedLine flow_line(const VectorField& x, Point z, const Box& box = Box::standard(),
                              const TraceOptions& opt = {}) {
  const TracedLeaf t = trace_full_leaf(Foliation::unit_field(x, "flow"), z, box, opt);
  return OrientedLine::traced(t.points);
}

/// Horizontal foliation, leaves oriented towards +x.
inline Foliation horizontal() {
  return Foliation::unit_field([](Point) { return Vector{1.0, 0.0}; }, "horizontal");
}

/// Level sets of H(x, y) = y, oriented by J grad H = (-1, 0).
inline Foliation horizontal_first_integral() {
  return Foliation::first_integral([](Point p) { return p.y; },
                                   [](Point) { return Vector{0.0, 1.0}; }, "level_y");
}

/// The band-spiral unit field X_n = (cos th_n(y), sin th_n(y)). th_n vanishes
/// for y <= 1 + m, equals n*pi for y >= 2 - m (m = kPlateau), and ramps in
/// between along `ramp`: quadratic ease-in and ease-out over a quarter of the
/// ramp each, linear in the middle, slope at most 4/3. Its flow index between
/// the rows y = 1 and y = 2 is n/2; band_spiral(1) is the Reeb model.
class BandSpiral {
 public:
  static constexpr double kPlateau = 0.0625;
  static constexpr double kEase = 0.25;

  explicit BandSpiral(int n) : n_(n) {}

  int n() const noexcept { return n_; }

  /// C^1 monotone ramp [0,1] -> [0,1].
  static double ramp(double u) noexcept {
    constexpr double a = kEase, c = 1.0 / (2 * a * (1 - a));
    u = std::clamp(u, 0.0, 1.0);
    if (u < a) return c * u * u;
    if (u > 1 - a) return 1.0 - c * (1 - u) * (1 - u);
    return (u - a / 2) / (1 - a);
  }

  double angle(double y) const noexcept {
    return n_ * std::numbers::pi * ramp((y - 1.0 - kPlateau) / (1.0 - 2 * kPlateau));
  }

  Vector field(Point p) const noexcept {
    const double a = angle(p.y);
    return {std::cos(a), std::sin(a)};
  }

  VectorField vector_field() const {
    return [n = n_](Point p) { return BandSpiral(n).field(p); };
  }

  Foliation foliation() const {
    return Foliation::unit_field(vector_field(), "band_spiral(" + std::to_string(n_) + ")");
  }

  Foliation orthogonal() const {
    return orthogonal_foliation(vector_field(), "orthogonal(band_spiral(" + std::to_string(n_) + "))");
  }

  /// Lowest height in (1, 2) where th_n = +-pi/2; the orthogonal foliation's
  /// leaf there is horizontal. None for n = 0.
  std::optional<double> barrier_height() const {
    if (n_ == 0) return std::nullopt;
    const double target = 1.0 / (2.0 * std::abs(n_));  // ramp value
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200 && hi - lo > 1e-16; ++k) {
      const double mid = 0.5 * (lo + hi);
      (ramp(mid) < target ? lo : hi) = mid;
    }
    return 1.0 + kPlateau + 0.5 * (lo + hi) * (1.0 - 2 * kPlateau);
  }

 private:
  int n_;
};

}  // namespace leafwind
