#pragma once

// Planar primitives: points, vectors, boxes, sampled paths, oriented lines,
// and the real-valued winding number of a vector field along a path.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "leafwind/errors.hpp"
#include "leafwind/unwrap.hpp"

namespace leafwind {

struct Vector {
  double dx = 0.0;
  double dy = 0.0;

  constexpr Vector operator+(Vector o) const noexcept { return {dx + o.dx, dy + o.dy}; }
  constexpr Vector operator-(Vector o) const noexcept { return {dx - o.dx, dy - o.dy}; }
  constexpr Vector operator-() const noexcept { return {-dx, -dy}; }
  constexpr Vector operator*(double s) const noexcept { return {dx * s, dy * s}; }
  friend constexpr Vector operator*(double s, Vector v) noexcept { return v * s; }
  double norm() const noexcept { return std::hypot(dx, dy); }
  bool operator==(const Vector&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  constexpr Point operator+(Vector v) const noexcept { return {x + v.dx, y + v.dy}; }
  constexpr Point operator-(Vector v) const noexcept { return {x - v.dx, y - v.dy}; }
  constexpr Vector operator-(Point o) const noexcept { return {x - o.x, y - o.y}; }
  bool operator==(const Point&) const = default;
};

constexpr double dot(Vector a, Vector b) noexcept { return a.dx * b.dx + a.dy * b.dy; }
constexpr double cross(Vector a, Vector b) noexcept { return a.dx * b.dy - a.dy * b.dx; }
/// Rotation by +90 degrees.
constexpr Vector rotate_left(Vector v) noexcept { return {-v.dy, v.dx}; }
inline double distance(Point a, Point b) noexcept { return (a - b).norm(); }

inline Vector normalized(Vector v) {
  const double n = v.norm();
  if (n == 0.0) throw ZeroVector();
  return {v.dx / n, v.dy / n};
}

/// Counterclockwise angle from the positive x-axis, in [0, 2pi).
inline double angle_of(Vector v) {
  if (v.dx == 0.0 && v.dy == 0.0) throw ZeroVector();
  double a = std::atan2(v.dy, v.dx);
  if (a < 0.0) a += 2 * std::numbers::pi;
  if (a >= 2 * std::numbers::pi) a = 0.0;
  return a;
}

struct Box {
  double xmin = -8.0, xmax = 8.0, ymin = -8.0, ymax = 8.0;

  bool contains(Point p) const noexcept {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  /// Grows each side by `fraction` of the box extent.
  Box inflated(double fraction) const noexcept {
    const double mx = fraction * (xmax - xmin), my = fraction * (ymax - ymin);
    return {xmin - mx, xmax + mx, ymin - my, ymax + my};
  }
  Box padded(double margin) const noexcept {
    return {xmin - margin, xmax + margin, ymin - margin, ymax + margin};
  }
  Box including(Point p) const noexcept {
    return {std::min(xmin, p.x), std::max(xmax, p.x), std::min(ymin, p.y), std::max(ymax, p.y)};
  }
  static Box around(Point a, Point b) noexcept {
    return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
  }
  /// The default working box [-8,8]^2.
  static constexpr Box standard() noexcept { return {}; }
};

/// A sampled path [0,1] -> R^2, evaluated by piecewise-linear interpolation.
class PolyPath {
 public:
  PolyPath(std::vector<Point> vertices, std::vector<double> params)
      : vertices_(std::move(vertices)), params_(std::move(params)) {
    validate();
  }

  /// Uniformly parametrized polyline through the given vertices.
  explicit PolyPath(std::vector<Point> vertices)
      : PolyPath(vertices, uniform(vertices.size())) {}

  static PolyPath segment(Point a, Point b) { return PolyPath({a, b}, {0.0, 1.0}); }

  /// Samples `curve` at n+1 uniform parameters.
  template <class Curve>
  static PolyPath sampled(Curve&& curve, std::size_t n) {
    if (n < 1) throw InvalidArgument("PolyPath::sampled needs n >= 1");
    std::vector<Point> v;
    std::vector<double> p;
    v.reserve(n + 1);
    p.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = k == n ? 1.0 : static_cast<double>(k) / n;
      v.push_back(curve(t));
      p.push_back(t);
    }
    return PolyPath(std::move(v), std::move(p));
  }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<double>& params() const noexcept { return params_; }
  Point front() const noexcept { return vertices_.front(); }
  Point back() const noexcept { return vertices_.back(); }

  Point at(double t) const {
    if (t <= 0.0) return vertices_.front();
    if (t >= 1.0) return vertices_.back();
    const auto it = std::upper_bound(params_.begin(), params_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - params_.begin());
    const double t0 = params_[k - 1], t1 = params_[k];
    const double s = (t - t0) / (t1 - t0);
    return vertices_[k - 1] + (vertices_[k] - vertices_[k - 1]) * s;
  }

  PolyPath reversed() const {
    std::vector<Point> v(vertices_.rbegin(), vertices_.rend());
    std::vector<double> p;
    p.reserve(params_.size());
    for (auto it = params_.rbegin(); it != params_.rend(); ++it) p.push_back(1.0 - *it);
    p.front() = 0.0;
    p.back() = 1.0;
    return PolyPath(std::move(v), std::move(p));
  }

  double length() const noexcept {
    double l = 0.0;
    for (std::size_t k = 1; k < vertices_.size(); ++k) l += distance(vertices_[k - 1], vertices_[k]);
    return l;
  }

 private:
  static std::vector<double> uniform(std::size_t n) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = n < 2 ? 0.0 : static_cast<double>(k) / (n - 1);
    if (n >= 2) p.back() = 1.0;
    return p;
  }

  void validate() const {
    if (vertices_.size() < 2) throw InvalidArgument("PolyPath needs at least two vertices");
    if (vertices_.size() != params_.size()) throw InvalidArgument("PolyPath params mismatch");
    if (params_.front() != 0.0 || params_.back() != 1.0)
      throw InvalidArgument("PolyPath params must run from 0 to 1");
    for (std::size_t k = 1; k < params_.size(); ++k) {
      if (!(params_[k] > params_[k - 1]))
        throw InvalidArgument("PolyPath params must be strictly increasing");
      if (vertices_[k] == vertices_[k - 1])
        throw InvalidArgument("PolyPath has repeated consecutive vertices");
    }
  }

  std::vector<Point> vertices_;
  std::vector<double> params_;
};

inline double point_segment_distance(Point p, Point a, Point b, double* param = nullptr) {
  const Vector ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 == 0.0 ? 0.0 : std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  if (param) *param = s;
  return distance(p, a + ab * s);
}

inline double segment_segment_distance(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

/// Nearest point of a polyline to p.
struct PolylineProjection {
  double distance = std::numeric_limits<double>::infinity();
  std::size_t segment = 0;  ///< index of the segment's first vertex
  double fraction = 0.0;    ///< position inside that segment
  Point foot{};
};

inline PolylineProjection project_onto(std::span<const Point> poly, Point p) {
  PolylineProjection best;
  for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
    double s = 0.0;
    const double d = point_segment_distance(p, poly[k], poly[k + 1], &s);
    if (d < best.distance) {
      best.distance = d;
      best.segment = k;
      best.fraction = s;
      best.foot = poly[k] + (poly[k + 1] - poly[k]) * s;
    }
  }
  return best;
}

/// Proper oriented topological line. Lines are carried analytically where
/// possible and traced to a polyline clipped to a working box on demand.
class OrientedLine {
 public:
  struct HorizontalAt {
    double y;
  };
  struct AnalyticCurve {
    std::function<Point(double)> at;
    std::string label;
  };
  struct TracedPolyline {
    std::vector<Point> vertices;  ///< ordered along the orientation
  };
  using Kind = std::variant<HorizontalAt, AnalyticCurve, TracedPolyline>;

  explicit OrientedLine(Kind k) : kind_(std::move(k)) {}

  static OrientedLine horizontal(double y) { return OrientedLine(HorizontalAt{y}); }
  static OrientedLine analytic(std::function<Point(double)> at, std::string label = {}) {
    return OrientedLine(AnalyticCurve{std::move(at), std::move(label)});
  }
  static OrientedLine traced(std::vector<Point> vertices) {
    if (vertices.size() < 2) throw InvalidArgument("traced line needs two vertices");
    return OrientedLine(TracedPolyline{std::move(vertices)});
  }

  const Kind& kind() const noexcept { return kind_; }

  /// Polyline representative inside `box`, ordered along the orientation.
  /// Analytic curves are sampled with parameter spacing `dt` outward from t=0
  /// until they leave the box.
  std::vector<Point> trace(const Box& box, double dt = 1.0 / 64, std::size_t cap = 1u << 20) const {
    if (const auto* h = std::get_if<HorizontalAt>(&kind_)) {
      std::vector<Point> v;
      const std::size_t n = 256;
      for (std::size_t k = 0; k <= n; ++k)
        v.push_back({box.xmin + (box.xmax - box.xmin) * static_cast<double>(k) / n, h->y});
      return v;
    }
    if (const auto* a = std::get_if<AnalyticCurve>(&kind_)) {
      std::vector<Point> back, fwd;
      fwd.push_back(a->at(0.0));
      for (std::size_t k = 1; k < cap; ++k) {
        const Point p = a->at(static_cast<double>(k) * dt);
        fwd.push_back(p);
        if (!box.contains(p)) break;
      }
      for (std::size_t k = 1; k < cap; ++k) {
        const Point p = a->at(-static_cast<double>(k) * dt);
        back.push_back(p);
        if (!box.contains(p)) break;
      }
      std::vector<Point> v(back.rbegin(), back.rend());
      v.insert(v.end(), fwd.begin(), fwd.end());
      return v;
    }
    return std::get<TracedPolyline>(kind_).vertices;
  }

  /// True when some pair of nonadjacent samples coincides (within tol).
  bool self_intersects(const Box& box, double tol = 1e-9) const {
    const auto v = trace(box);
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      for (std::size_t j = i + 2; j + 1 < v.size(); ++j)
        if (segment_segment_distance(v[i], v[i + 1], v[j], v[j + 1]) < tol) return true;
    return false;
  }

  /// Properness surrogate: both ends of the traced representative leave `box`.
  bool escapes(const Box& box) const {
    const auto v = trace(box.inflated(0.2));
    return !box.contains(v.front()) && !box.contains(v.back());
  }

 private:
  Kind kind_;
};

/// Minimum distance between two polylines, with per-segment box rejection.
inline double polyline_distance(std::span<const Point> a, std::span<const Point> b,
                                double stop_below = 0.0) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const Box sa = Box::around(a[i], a[i + 1]);
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const Box sb = Box::around(b[j], b[j + 1]);
      const double gx = std::max({0.0, sb.xmin - sa.xmax, sa.xmin - sb.xmax});
      const double gy = std::max({0.0, sb.ymin - sa.ymax, sa.ymin - sb.ymax});
      if (std::hypot(gx, gy) >= best) continue;
      best = std::min(best, segment_segment_distance(a[i], a[i + 1], b[j], b[j + 1]));
      if (best <= stop_below) return best;
    }
  }
  return best;
}

/// True iff the traced representatives of g1 and g2 come within tol inside box.
inline bool lines_intersect(const OrientedLine& g1, const OrientedLine& g2, const Box& box,
                            double tol = 1e-6) {
  const auto a = g1.trace(box);
  const auto b = g2.trace(box);
  auto clip = [&](const std::vector<Point>& v) {
    std::vector<Point> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const bool in = box.contains(v[k]) || (k > 0 && box.contains(v[k - 1])) ||
                      (k + 1 < v.size() && box.contains(v[k + 1]));
      if (in) out.push_back(v[k]);
    }
    return out;
  };
  const auto ca = clip(a), cb = clip(b);
  if (ca.size() < 2 || cb.size() < 2) return false;
  return polyline_distance(ca, cb, 0.0) < tol;
}

/// Real winding number of a nonvanishing field along [0,1]:
/// (s~(1) - s~(0)) / 2pi for a continuous unwrap s~ of its angle.
template <class FieldAlongPath>
double winding_number(FieldAlongPath&& field, int samples = 65, int max_depth = 40) {
  if (samples < 2) throw InvalidArgument("winding_number needs samples >= 2");
  auto angle_at = [&](double t) {
    const Vector v = field(t);
    if (v.dx == 0.0 && v.dy == 0.0) throw ZeroVector(t);
    return std::atan2(v.dy, v.dx);
  };
  const UnwrapResult u = unwrap_angle_path(angle_at, samples - 1, max_depth);
  return (u.end - u.start) / (2 * std::numbers::pi);
}

}  // namespace leafwind
