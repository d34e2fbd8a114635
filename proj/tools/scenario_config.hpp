#pragma once

// Scenario configuration files: INI-style key/value text parsed with
// boost::property_tree. Every numeric key is optional and falls back to the
// library default. Unknown sections or keys are rejected with their path.
//
//   name = band_spiral_3
//   [foliation]  family = horizontal | band_spiral,  n = <int>
//   [map]        kind = translation | flow_time_one | perturbed
//                bump_center = x, y   bump_radius = r   bump_vector = dx, dy
//   [orbits]     seed1 = x, y   seed2 = x, y
//   [lines]      line1, line2 = flow | horizontal:<y> | tilted:<y>,<slope>
//   [witness]    bend = <beta>   shear = <c>
//   [numerics]   step, eps, tol_leaf, tol_snap, max_depth, whitney_N,
//                tol_fix, fixed_point_grid, verify_choices

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "leafwind/errors.hpp"
#include "leafwind/scenario.hpp"

namespace leafwind::config {

namespace pt = boost::property_tree;

namespace detail {

inline const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"name"}},
      {"foliation", {"family", "n"}},
      {"map", {"kind", "bump_center", "bump_radius", "bump_vector"}},
      {"orbits", {"seed1", "seed2"}},
      {"lines", {"line1", "line2"}},
      {"witness", {"bend", "shear"}},
      {"numerics",
       {"step", "eps", "tol_leaf", "tol_snap", "max_depth", "whitney_N", "tol_fix", "fixed_point_grid",
        "verify_choices"}},
  };
  return s;
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <class T>
T number(const std::string& field, const std::string& text) {
  std::istringstream is(trim(text));
  T v{};
  is >> v;
  if (!is || !is.eof()) throw ConfigError(field + ": expected a number, got '" + text + "'");
  return v;
}

inline std::pair<double, double> pair_of(const std::string& field, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError(field + ": expected 'a, b', got '" + text + "'");
  return {number<double>(field, text.substr(0, comma)), number<double>(field, text.substr(comma + 1))};
}

inline bool boolean(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(field + ": expected true or false, got '" + text + "'");
}

inline LineSpec line_of(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  LineSpec s;
  if (t == "flow") return s;
  const auto colon = t.find(':');
  const std::string kind = trim(t.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : t.substr(colon + 1);
  if (kind == "horizontal") {
    s.kind = LineSpec::Kind::Horizontal;
    s.y = number<double>(field, args);
    return s;
  }
  if (kind == "tilted") {
    s.kind = LineSpec::Kind::Tilted;
    std::tie(s.y, s.slope) = pair_of(field, args);
    return s;
  }
  throw ConfigError(field + ": unknown line '" + text + "' (flow, horizontal:<y>, tilted:<y>,<slope>)");
}

}  // namespace detail

/// Parses configuration text; `origin` names the source in diagnostics.
inline ScenarioSpec parse(const std::string& text, const std::string& origin = "<config>") {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  const auto& schema = detail::schema();
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      if (!schema.at("").count(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
      continue;
    }
    const auto sec = schema.find(key);
    if (sec == schema.end() || key.empty()) throw ConfigError(origin + ": unknown section [" + key + "]");
    for (const auto& [k, v] : node)
      if (!sec->second.count(k)) throw ConfigError(origin + ": unknown key '" + key + "." + k + "'");
  }

  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };
  auto field = [&](const std::string& path) { return origin + ": " + path; };

  ScenarioSpec s;
  if (auto v = get("name")) s.name = detail::trim(*v);

  const std::string family = detail::trim(get("foliation.family").value_or("band_spiral"));
  if (family == "horizontal") s.family = Family::Horizontal;
  else if (family == "band_spiral") s.family = Family::BandSpiral;
  else throw ConfigError(field("foliation.family") + ": expected horizontal or band_spiral, got '" + family + "'");
  if (auto v = get("foliation.n")) s.n = detail::number<int>(field("foliation.n"), *v);

  const std::string kind = detail::trim(
      get("map.kind").value_or(s.family == Family::Horizontal ? "translation" : "flow_time_one"));
  if (kind == "translation") s.map = MapKind::Translation;
  else if (kind == "flow_time_one") s.map = MapKind::FlowTimeOne;
  else if (kind == "perturbed") s.map = MapKind::Perturbed;
  else throw ConfigError(field("map.kind") + ": expected translation, flow_time_one or perturbed, got '" + kind + "'");
  if (s.map == MapKind::Perturbed) {
    BumpSpec b;
    if (auto v = get("map.bump_center")) {
      const auto [x, y] = detail::pair_of(field("map.bump_center"), *v);
      b.center = {x, y};
    }
    if (auto v = get("map.bump_radius")) b.radius = detail::number<double>(field("map.bump_radius"), *v);
    if (auto v = get("map.bump_vector")) {
      const auto [dx, dy] = detail::pair_of(field("map.bump_vector"), *v);
      b.vector = {dx, dy};
    }
    s.bump = b;
  } else if (get("map.bump_center") || get("map.bump_radius") || get("map.bump_vector")) {
    throw ConfigError(field("map.bump_*") + ": bump keys need kind = perturbed");
  }

  for (auto [key, dest] : {std::pair{"orbits.seed1", &s.seed1}, std::pair{"orbits.seed2", &s.seed2}})
    if (auto v = get(key)) {
      const auto [x, y] = detail::pair_of(field(key), *v);
      *dest = {x, y};
    }
  if (auto v = get("lines.line1")) s.line1 = detail::line_of(field("lines.line1"), *v);
  if (auto v = get("lines.line2")) s.line2 = detail::line_of(field("lines.line2"), *v);
  if (auto v = get("witness.bend")) s.bend = detail::number<double>(field("witness.bend"), *v);
  if (auto v = get("witness.shear")) s.shear = detail::number<double>(field("witness.shear"), *v);

  Numerics& num = s.numerics;
  auto real = [&](const char* key, double& dest) {
    if (auto v = get(std::string("numerics.") + key)) dest = detail::number<double>(field(std::string("numerics.") + key), *v);
  };
  real("step", num.step);
  real("eps", num.eps);
  real("tol_leaf", num.tol_leaf);
  real("tol_snap", num.tol_snap);
  real("tol_fix", num.tol_fix);
  if (auto v = get("numerics.max_depth")) num.max_depth = detail::number<int>(field("numerics.max_depth"), *v);
  if (auto v = get("numerics.whitney_N")) num.whitney_n = detail::number<std::size_t>(field("numerics.whitney_N"), *v);
  if (auto v = get("numerics.fixed_point_grid"))
    num.fixed_point_grid = detail::number<int>(field("numerics.fixed_point_grid"), *v);
  if (auto v = get("numerics.verify_choices")) s.verify_choices = detail::boolean(field("numerics.verify_choices"), *v);

  if (!(num.step > 0 && num.step <= 0.5)) throw ConfigError(field("numerics.step") + ": must lie in (0, 0.5]");
  if (!(num.eps > 0)) throw ConfigError(field("numerics.eps") + ": must be positive");
  if (!(num.tol_leaf > 0)) throw ConfigError(field("numerics.tol_leaf") + ": must be positive");
  if (!(num.eps >= 2 * num.tol_leaf)) throw ConfigError(field("numerics.eps") + ": must be at least 2 * tol_leaf");
  if (!(num.tol_snap > 0 && num.tol_snap < 0.5)) throw ConfigError(field("numerics.tol_snap") + ": must lie in (0, 0.5)");
  if (num.max_depth < 1 || num.max_depth > 60) throw ConfigError(field("numerics.max_depth") + ": must lie in [1, 60]");
  if (num.whitney_n < 1 || num.whitney_n > 60) throw ConfigError(field("numerics.whitney_N") + ": must lie in [1, 60]");
  if (num.fixed_point_grid < 2) throw ConfigError(field("numerics.fixed_point_grid") + ": must be at least 2");
  if (s.family == Family::Horizontal && s.n != 0) throw ConfigError(field("foliation.n") + ": horizontal family takes no n");
  if (s.map == MapKind::Translation && s.family != Family::Horizontal && s.n != 0)
    throw ConfigError(field("map.kind") + ": translation needs n = 0");
  if (s.seed1 == s.seed2) throw ConfigError(field("orbits") + ": the two seeds coincide");
  return s;
}

inline ScenarioSpec load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  ScenarioSpec s = parse(ss.str(), file.string());
  if (!s.name.size() || s.name == "scenario") s.name = file.stem().string();
  return s;
}

}  // namespace leafwind::config
