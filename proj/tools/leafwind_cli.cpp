// leafwind: index computations between orbits and transverse lines.
//
//   leafwind index <config> [--method ph|leroux|foliation|all] [--deterministic]
//   leafwind verify-theorem-a --n-range a..b [--out file.csv] [--step h] [--jobs k]
//   leafwind whitney-props [--trials k] [--seed s] [--N n] [--singletons]
//
// Exit codes: 0 ok, 1 config error, 2 computation error, 3 verification failure.
// LEAFWIND_LOG = error | info | debug sets the stderr log level.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leafwind/leafwind.hpp"
#include "report.hpp"
#include "scenario_config.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kCompute = 2, kVerify = 3 };

void setup_logging() {
  auto log = spdlog::stderr_color_mt("leafwind");
  log->set_pattern("[%l] %v");
  const char* env = std::getenv("LEAFWIND_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") log->set_level(spdlog::level::debug);
  else if (level == "info") log->set_level(spdlog::level::info);
  else log->set_level(spdlog::level::err);
  spdlog::set_default_logger(log);
}

std::vector<leafwind::Method> parse_methods(const std::string& m) {
  using leafwind::Method;
  if (m == "ph") return {Method::PoincareHopf};
  if (m == "leroux") return {Method::LeRoux};
  if (m == "foliation") return {Method::Foliation};
  return {Method::PoincareHopf, Method::LeRoux, Method::Foliation};
}

int cmd_index(const std::string& path, const std::string& method, bool deterministic) {
  using namespace leafwind;
  ScenarioSpec spec;
  try {
    spec = config::load(path);
  } catch (const Error& e) {
    std::cout << report::error_json(e.code(), e.what(), "config").dump(2) << '\n';
    return kConfig;
  }
  spdlog::info("scenario {}: family n={} map kind {}", spec.name, spec.n, static_cast<int>(spec.map));
  std::optional<Scenario> sc;
  try {
    sc.emplace(build_scenario(spec));
  } catch (const ConfigError& e) {
    std::cout << report::error_json(e.code(), e.what(), "load").dump(2) << '\n';
    return kConfig;
  } catch (const Error& e) {
    std::cout << report::error_json(e.code(), e.what(), "load").dump(2) << '\n';
    return kCompute;
  }
  const TheoremAReport rep = theorem_a_check(*sc, parse_methods(method));
  for (const auto& o : rep.outcomes)
    if (o.result) spdlog::debug("{}: {} ({} samples, depth {})", to_string(o.method), o.result->value.display(),
                                o.result->samples, o.result->depth);
  std::cout << report::to_json(*sc, rep, deterministic).dump(2) << '\n';
  if (!rep.failed_stage.empty()) return kCompute;
  return rep.verdict ? kOk : kVerify;
}

int cmd_verify(const std::string& range, const std::string& out, double step, unsigned jobs, bool deterministic) {
  using namespace leafwind;
  static const std::regex re(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(range, m, re)) {
    spdlog::error("--n-range must look like a..b, got '{}'", range);
    return kConfig;
  }
  const int a = std::stoi(m[1]), b = std::stoi(m[2]);
  if (a > b) {
    spdlog::error("--n-range needs a <= b");
    return kConfig;
  }
  auto row = [step, deterministic](int n) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ScenarioSpec spec = band_spiral_spec(n, step);
      const Scenario sc = build_scenario(spec);
      TheoremAReport rep = theorem_a_check(sc);
      rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      for (const auto& o : rep.outcomes)
        if (!o.error_code.empty()) spdlog::error("n={} {}: {} {}", n, to_string(o.method), o.error_code, o.error);
      return std::pair{report::csv_row(n, rep, deterministic), rep.verdict};
    } catch (const Error& e) {
      spdlog::error("n={} load: {} {}", n, e.code(), e.what());
      return std::pair{fmt::format("{},,,,,FAILED,0", n), false};
    }
  };
  std::vector<std::pair<std::string, bool>> rows(static_cast<std::size_t>(b - a + 1));
  if (jobs <= 1) {
    for (int n = a; n <= b; ++n) rows[static_cast<std::size_t>(n - a)] = row(n);
  } else {
    std::vector<std::future<std::pair<std::string, bool>>> pending;
    for (int n = a; n <= b; ++n) pending.push_back(std::async(std::launch::async, row, n));
    for (std::size_t k = 0; k < pending.size(); ++k) rows[k] = pending[k].get();
  }
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      spdlog::error("cannot write {}", out);
      return kConfig;
    }
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << report::kCsvHeader << '\n';
  bool all = true;
  for (const auto& [text, ok] : rows) {
    os << text << '\n';
    all = all && ok;
  }
  spdlog::info("{} rows, {}", rows.size(), all ? "all verdicts true" : "some rows failed");
  return all ? kOk : kVerify;
}

int cmd_whitney(std::size_t trials, std::uint64_t seed, std::size_t n, bool singletons) {
  using namespace leafwind;
  if (trials == 0) spdlog::warn("trials = 0: every property passes vacuously");
  WhitneyPropertyOptions opt;
  opt.n = n;
  if (singletons) opt.max_points = 1;
  const WhitneyPropertyReport rep = run_whitney_properties(trials, seed, opt);
  std::cout << report::to_json(rep).dump(2) << '\n';
  return rep.passed() ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"leafwind: foliation and Le Roux indices of Brouwer homeomorphisms"};
  app.require_subcommand(1);

  std::string config_path, method = "all";
  bool deterministic = false;
  auto* index = app.add_subcommand("index", "Compute the index of one scenario and print a JSON report");
  index->add_option("config", config_path, "Scenario configuration file")->required();
  index->add_option("--method", method, "Which index to compute")
      ->check(CLI::IsMember({"ph", "leroux", "foliation", "all"}));
  index->add_flag("--deterministic", deterministic, "Leave wall time out of the report");

  std::string range, out;
  double step = 1.0 / 64;
  unsigned jobs = 1;
  auto* verify = app.add_subcommand("verify-theorem-a", "Cross-check the three indices on band_spiral(n)");
  verify->add_option("--n-range", range, "Inclusive range a..b")->required();
  verify->add_option("--out", out, "CSV output file (default: standard output)");
  verify->add_option("--step", step, "Flow integrator step")->check(CLI::PositiveNumber);
  verify->add_option("--jobs", jobs, "Rows computed in parallel");
  verify->add_flag("--deterministic", deterministic, "Write 0 in the ms column");

  std::size_t trials = 1000, whitney_n = 32;
  std::uint64_t seed = 20240607;
  bool singletons = false;
  auto* whitney = app.add_subcommand("whitney-props", "Run the Whitney size-function property suite");
  whitney->add_option("--trials", trials, "Random cases per property");
  whitney->add_option("--seed", seed, "Random seed");
  whitney->add_option("--N", whitney_n, "Series truncation")->check(CLI::Range(1, 60));
  whitney->add_flag("--singletons", singletons, "Draw only one-point sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*index) return cmd_index(config_path, method, deterministic);
    if (*verify) return cmd_verify(range, out, step, jobs, deterministic);
    if (*whitney) return cmd_whitney(trials, seed, whitney_n, singletons);
  } catch (const leafwind::Error& e) {
    std::cout << leafwind::report::error_json(e.code(), e.what(), "run").dump(2) << '\n';
    return kCompute;
  }
  return kOk;
}
