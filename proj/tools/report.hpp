#pragma once

// JSON reports and CSV sweep rows.

#include <fmt/format.h>

#include <cstdint>
#include <string>

#include "json.hpp"

#include "leafwind/scenario.hpp"
#include "leafwind/whitney_properties.hpp"

namespace leafwind::report {

using nlohmann::ordered_json;

inline constexpr const char* kCsvHeader = "n,ph_halves,leroux_halves,foliation_halves,float_oracle,verdict,ms";

inline ordered_json numerics_json(const ScenarioSpec& s) {
  const Numerics& n = s.numerics;
  return {{"step", n.step},           {"eps", n.eps},         {"tol_leaf", n.tol_leaf},
          {"tol_snap", n.tol_snap},   {"max_depth", n.max_depth}, {"whitney_N", n.whitney_n},
          {"tol_fix", n.tol_fix},     {"fixed_point_grid", n.fixed_point_grid},
          {"verify_choices", s.verify_choices}};
}

inline ordered_json outcome_json(const MethodOutcome& o) {
  ordered_json j{{"method", to_string(o.method)}};
  if (o.result) {
    j["quarters"] = o.result->value.quarters();
    j["halves"] = o.result->value.halves();
    j["display"] = o.result->value.display();
    j["float_oracle"] = o.float_oracle.value_or(o.result->value.value());
    j["samples_used"] = o.result->samples;
    j["refinement_depth"] = o.result->depth;
  }
  if (!o.reason.empty()) j["reason"] = o.reason;
  if (!o.error_code.empty()) j["error"] = {{"code", o.error_code}, {"message", o.error}};
  return j;
}

/// Single-scenario report. `deterministic` leaves out the wall time so that
/// repeated runs are byte-identical.
inline ordered_json to_json(const Scenario& sc, const TheoremAReport& rep, bool deterministic) {
  ordered_json j{{"scenario", rep.scenario}};
  ordered_json methods = ordered_json::array();
  for (const auto& o : rep.outcomes) methods.push_back(outcome_json(o));
  j["results"] = std::move(methods);
  j["verdict"] = rep.verdict;
  if (!rep.failed_stage.empty()) j["failed_stage"] = rep.failed_stage;
  j["witness"] = {{"justification", to_string(sc.witness.justification())},
                  {"h", sc.witness.h().name()}};
  if (auto b = sc.witness.barrier_height()) j["witness"]["barrier_height"] = *b;
  if (sc.str) j["str_certificate"] = sc.str->certificate();
  j["numerics"] = numerics_json(sc.spec);
  if (!deterministic) j["wall_ms"] = rep.wall_ms;
  return j;
}

inline ordered_json error_json(const std::string& code, const std::string& message, const std::string& stage) {
  return {{"error", {{"code", code}, {"message", message}, {"stage", stage}}}};
}

inline std::string halves_cell(const TheoremAReport& rep, Method m) {
  const MethodOutcome* o = rep.find(m);
  if (!o || !o->result) return o && !o->error_code.empty() ? "FAILED" : "";
  return std::to_string(o->result->value.halves());
}

/// One sweep row; the float oracle column carries the pair-field winding.
inline std::string csv_row(int n, const TheoremAReport& rep, bool deterministic) {
  const MethodOutcome* f = rep.find(Method::Foliation);
  const std::string oracle =
      f && f->float_oracle ? fmt::format("{:.12f}", *f->float_oracle) : std::string("");
  const std::string verdict = rep.verdict ? "true" : (rep.failed_stage.empty() ? "false" : "FAILED");
  return fmt::format("{},{},{},{},{},{},{}", n, halves_cell(rep, Method::PoincareHopf),
                     halves_cell(rep, Method::LeRoux), halves_cell(rep, Method::Foliation), oracle, verdict,
                     deterministic ? std::string("0") : fmt::format("{:.1f}", rep.wall_ms));
}

inline ordered_json to_json(const WhitneyPropertyReport& rep) {
  ordered_json groups = ordered_json::array();
  for (const auto& g : rep.groups) {
    ordered_json jg{{"name", g.name}, {"checks", g.checks}, {"failures", g.failures}};
    if (g.failures) jg["counterexample"] = g.counterexample;
    groups.push_back(std::move(jg));
  }
  return {{"seed", rep.seed}, {"trials", rep.trials}, {"N", rep.n}, {"groups", std::move(groups)},
          {"passed", rep.passed()}};
}

}  // namespace leafwind::report
