#pragma once

// Scenario assembly (flow family, transverse foliation, map, lines, witnesses)
// and the three-method cross-check harness.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "leafwind/brouwer.hpp"
#include "leafwind/foliation.hpp"
#include "leafwind/index.hpp"
#include "leafwind/plane.hpp"

namespace leafwind {

struct Numerics {
  double step = 1.0 / 64;  ///< flow integrator step
  double eps = 1e-2;       ///< forward-on-leaf offset
  double tol_leaf = 1e-4;
  double tol_snap = 1e-6;
  int max_depth = 40;
  std::size_t whitney_n = 32;
  double tol_fix = 1e-3;
  int fixed_point_grid = 33;
};

enum class Family { Horizontal, BandSpiral };
enum class MapKind { Translation, FlowTimeOne, Perturbed };

struct LineSpec {
  enum class Kind { FlowLine, Horizontal, Tilted };
  Kind kind = Kind::FlowLine;
  double y = 0.0;      ///< Horizontal / Tilted: height at x = 0
  double slope = 0.0;  ///< Tilted only
};

struct BumpSpec {
  Point center{0.0, 1.5};
  double radius = 0.2;
  Vector vector{0.0, 0.05};
};

/// Declarative scenario description. Seeds and lines are given in model
/// coordinates; a nonzero `bend` conjugates the whole model by bend(beta).
struct ScenarioSpec {
  std::string name = "scenario";
  Family family = Family::BandSpiral;
  int n = 0;
  MapKind map = MapKind::FlowTimeOne;
  Point seed1{0.0, 1.0};
  Point seed2{0.0, 2.0};
  LineSpec line1{};
  LineSpec line2{};
  double bend = 0.0;
  double shear = 0.0;  ///< extra shear applied after the straightener
  std::optional<BumpSpec> bump;
  Numerics numerics{};
  bool verify_choices = false;
};

/// A loaded scenario in working coordinates.
struct Scenario {
  ScenarioSpec spec;
  VectorField field;
  Foliation foliation;
  BrouwerMap map;
  Point x1, x2;
  OrientedLine g1, g2;
  PlaneHomeo straightener;
  std::optional<StrMap> str;  ///< absent when the lines meet
  HandelWitness witness;
  PolyPath alpha;  ///< from x1 to x2 in working coordinates
  bool intersecting = false;

  IndexOptions index_options() const {
    IndexOptions o;
    o.max_depth = spec.numerics.max_depth;
    o.tol_snap = spec.numerics.tol_snap;
    o.tol_fix = spec.numerics.tol_fix;
    o.tol_leaf = spec.numerics.tol_leaf;
    o.verify_alternative_path = spec.verify_choices;
    return o;
  }
};

namespace detail {

inline OrientedLine make_line(const LineSpec& s, const VectorField& field, Point seed,
                              const PlaneHomeo& g) {
  switch (s.kind) {
    case LineSpec::Kind::FlowLine: return flow_line(field, seed);
    case LineSpec::Kind::Horizontal:
      return OrientedLine::analytic([y = s.y, g](double t) { return g(Point{t, y}); }, "horizontal");
    case LineSpec::Kind::Tilted:
      return OrientedLine::analytic(
          [y = s.y, m = s.slope, g](double t) { return g(Point{t, y + m * t}); }, "tilted");
  }
  throw InvalidArgument("unknown line kind");
}

}  // namespace detail

/// Builds every component and runs the load-time checks: fixed-point grid,
/// Str certificate, Handel witness (with barrier leaf when separated).
inline Scenario build_scenario(const ScenarioSpec& spec) {
  const Numerics& num = spec.numerics;
  if (spec.family == Family::Horizontal && spec.n != 0)
    throw ConfigError("horizontal family takes no n");
  if (spec.seed1 == spec.seed2) throw ConfigError("the two orbit seeds coincide");
  const BandSpiral model(spec.family == Family::Horizontal ? 0 : spec.n);
  const PlaneHomeo g = spec.bend == 0.0 ? PlaneHomeo::identity() : PlaneHomeo::bend(spec.bend);
  const PlaneHomeo ginv = spec.bend == 0.0 ? PlaneHomeo::identity() : PlaneHomeo::strip_straightener(spec.bend);

  const Foliation flow_model = model.foliation();
  const Foliation flow_work = spec.bend == 0.0 ? flow_model : push_forward(flow_model, g);
  const VectorField field = flow_work.field();
  const Foliation transverse = spec.bend == 0.0 ? model.orthogonal() : push_forward(model.orthogonal(), g);

  const FixedPointCheck chk{Box::standard(), num.fixed_point_grid, num.tol_fix};
  BrouwerMap base = spec.map == MapKind::Translation
                        ? translation_T()
                        : flow_time_one(model.vector_field(), num.step, chk, "flow(" + flow_model.name() + ")");
  if (spec.map == MapKind::Translation) {
    if (model.n() != 0) throw ConfigError("translation map requires n = 0");
    certify_fixed_point_free(base, chk);
  }
  if (spec.bend != 0.0) base = conjugate(base, g);

  const Point x1 = g(spec.seed1), x2 = g(spec.seed2);
  BrouwerMap map = base;
  if (spec.map == MapKind::Perturbed) {
    if (!spec.bump) throw ConfigError("perturbed map needs a bump");
    const std::vector<Orbit> orbits{orbit(base, x1, -20, 20, {num.tol_fix}),
                                    orbit(base, x2, -20, 20, {num.tol_fix})};
    map = perturb_rel_orbits(base, spec.bump->center, spec.bump->radius, spec.bump->vector, orbits,
                             {0.05, num.tol_fix, 25});
  }

  OrientedLine g1 = detail::make_line(spec.line1, field, x1, g);
  OrientedLine g2 = detail::make_line(spec.line2, field, x2, g);
  if (spec.line1.kind == LineSpec::Kind::FlowLine && spec.line2.kind == LineSpec::Kind::FlowLine &&
      project_onto(g1.trace(Box::standard().including(x2)), x2).distance < num.tol_leaf)
    throw ConfigError("both seeds lie on the same flow line; the two lines must be distinct");
  const bool meet = lines_intersect(g1, g2, Box::standard());
  const PlaneHomeo h = spec.shear == 0.0 ? ginv : PlaneHomeo::shear_x(spec.shear).after(ginv);
  std::optional<StrMap> str;
  if (!meet) str = StrMap::certify(h, g1, g2);

  IndexOptions iopt;
  iopt.tol_fix = num.tol_fix;
  const auto why = model.n() == 0 ? HandelWitness::Justification::ExplicitModel
                                  : HandelWitness::Justification::StrDaggerSeparated;
  HandelWitness witness = HandelWitness::verify(ginv, map, x1, x2, why, &transverse,
                                                model.barrier_height(), iopt);

  std::vector<Point> alpha;
  for (int k = 0; k <= 64; ++k) alpha.push_back(g(spec.seed1 + (spec.seed2 - spec.seed1) * (k / 64.0)));

  return Scenario{spec, field, transverse, map, x1, x2, std::move(g1), std::move(g2), ginv,
                  std::move(str), std::move(witness), PolyPath(std::move(alpha)), meet};
}

/// Convenience: the band_spiral(n) flow scenario with default numerics.
inline ScenarioSpec band_spiral_spec(int n, double step = 1.0 / 64) {
  ScenarioSpec s;
  s.name = "band_spiral_" + std::to_string(n);
  s.n = n;
  s.numerics.step = step;
  return s;
}

enum class Method { PoincareHopf, LeRoux, Foliation };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::PoincareHopf: return "ph";
    case Method::LeRoux: return "leroux";
    case Method::Foliation: return "foliation";
  }
  return "?";
}

struct MethodOutcome {
  Method method = Method::PoincareHopf;
  std::optional<IndexResult> result;
  std::optional<double> float_oracle;
  std::string reason;      ///< e.g. "intersecting", "not applicable"
  std::string error_code;  ///< empty on success
  std::string error;
};

struct TheoremAReport {
  std::string scenario;
  std::vector<MethodOutcome> outcomes;
  bool verdict = false;  ///< all computed values equal and no method failed
  std::string failed_stage;
  double wall_ms = 0.0;

  const MethodOutcome* find(Method m) const {
    for (const auto& o : outcomes)
      if (o.method == m) return &o;
    return nullptr;
  }
};

inline MethodOutcome run_method(const Scenario& sc, Method m) {
  MethodOutcome out;
  out.method = m;
  const IndexOptions opt = sc.index_options();
  try {
    switch (m) {
      case Method::PoincareHopf: {
        if (sc.spec.map == MapKind::Perturbed) {
          out.reason = "not applicable";
          break;
        }
        out.result = poincare_hopf_index(sc.field, sc.straightener, sc.alpha, opt);
        out.float_oracle = out.result->float_oracle;
        break;
      }
      case Method::LeRoux: {
        const Point y1 = sc.witness.h()(sc.x1), y2 = sc.witness.h()(sc.x2);
        const Point r1{std::nearbyint(y1.x), 1.0}, r2{std::nearbyint(y2.x), 2.0};
        out.result = leroux_index_via_theta(sc.witness, r1, r2, PolyPath::segment(r1, r2), opt);
        out.float_oracle = out.result->float_oracle;
        break;
      }
      case Method::Foliation: {
        if (sc.spec.map == MapKind::Perturbed) {
          out.reason = "not applicable";
          break;
        }
        if (sc.intersecting) {
          out.result = IndexResult{};
          out.result->reason = out.reason = "intersecting";
          out.float_oracle = 0.0;
          break;
        }
        out.result = foliation_index(sc.foliation, sc.g1, sc.g2, *sc.str, sc.spec.numerics.eps, sc.alpha, opt);
        out.float_oracle = intuitive_index_float(sc.foliation, sc.g1, sc.g2, *sc.str,
                                                 sc.spec.numerics.eps, sc.alpha, opt);
        break;
      }
    }
  } catch (const Error& e) {
    out.result.reset();
    out.error_code = e.code();
    out.error = e.what();
  }
  return out;
}

/// Runs the requested methods and compares their index values exactly.
inline TheoremAReport theorem_a_check(const Scenario& sc,
                                      const std::vector<Method>& methods = {Method::PoincareHopf, Method::LeRoux,
                                                                            Method::Foliation}) {
  const auto t0 = std::chrono::steady_clock::now();
  TheoremAReport rep;
  rep.scenario = sc.spec.name;
  bool ok = true;
  std::optional<IndexValue> first;
  for (Method m : methods) {
    MethodOutcome o = run_method(sc, m);
    if (!o.error_code.empty()) {
      ok = false;
      if (rep.failed_stage.empty()) rep.failed_stage = to_string(m);
    } else if (o.result) {
      if (!first) first = o.result->value;
      else if (!(o.result->value == *first)) ok = false;
    }
    rep.outcomes.push_back(std::move(o));
  }
  rep.verdict = ok;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace leafwind
