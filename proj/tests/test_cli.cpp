#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "report.hpp"
#include "scenario_config.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace leafwind;

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(LEAFWIND_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string scenario(const std::string& name) { return std::string(LEAFWIND_SCENARIO_DIR) + "/" + name; }

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("leafwind_test_" + name);
  std::ofstream(p) << text;
  return p;
}

TEST(Config, ParsesEveryKey) {
  const ScenarioSpec s = config::parse(R"(name = demo
[foliation]
family = band_spiral
n = 2
[map]
kind = perturbed
bump_center = 0.5, 1.5
bump_radius = 0.25
bump_vector = 0.01, -0.02
[orbits]
seed1 = 0.5, 1
seed2 = -1, 2
[lines]
line1 = flow
line2 = horizontal:2
[witness]
bend = 0.2
shear = 0.1
[numerics]
step = 0.0078125
eps = 0.02
tol_leaf = 1e-4
tol_snap = 1e-7
max_depth = 35
whitney_N = 24
tol_fix = 1e-4
fixed_point_grid = 17
verify_choices = true
)");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.family, Family::BandSpiral);
  EXPECT_EQ(s.n, 2);
  EXPECT_EQ(s.map, MapKind::Perturbed);
  ASSERT_TRUE(s.bump);
  EXPECT_EQ(s.bump->center, (Point{0.5, 1.5}));
  EXPECT_EQ(s.bump->radius, 0.25);
  EXPECT_EQ(s.bump->vector, (Vector{0.01, -0.02}));
  EXPECT_EQ(s.seed1, (Point{0.5, 1}));
  EXPECT_EQ(s.seed2, (Point{-1, 2}));
  EXPECT_EQ(s.line2.kind, LineSpec::Kind::Horizontal);
  EXPECT_EQ(s.line2.y, 2.0);
  EXPECT_EQ(s.bend, 0.2);
  EXPECT_EQ(s.shear, 0.1);
  EXPECT_EQ(s.numerics.step, 0.0078125);
  EXPECT_EQ(s.numerics.max_depth, 35);
  EXPECT_EQ(s.numerics.whitney_n, 24u);
  EXPECT_EQ(s.numerics.fixed_point_grid, 17);
  EXPECT_TRUE(s.verify_choices);
}

TEST(Config, Defaults) {
  const ScenarioSpec s = config::parse("[foliation]\nn = 4\n");
  EXPECT_EQ(s.family, Family::BandSpiral);
  EXPECT_EQ(s.map, MapKind::FlowTimeOne);
  EXPECT_EQ(s.numerics.eps, 1e-2);
  EXPECT_EQ(s.numerics.max_depth, 40);
  EXPECT_EQ(config::parse("[foliation]\nfamily = horizontal\n").map, MapKind::Translation);
}

void expect_config_error(const std::string& text, const std::string& fragment) {
  try {
    config::parse(text, "t.ini");
    ADD_FAILURE() << "accepted: " << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Config, Diagnostics) {
  expect_config_error("[numerics]\neps = -1\n", "numerics.eps");
  expect_config_error("[numerics]\nstep = fast\n", "numerics.step");
  expect_config_error("[numerics]\nmax_depth = 0\n", "numerics.max_depth");
  expect_config_error("[numerics]\ncolour = red\n", "numerics.colour");
  expect_config_error("[extras]\na = 1\n", "[extras]");
  expect_config_error("[foliation]\nfamily = spiral\n", "foliation.family");
  expect_config_error("[lines]\nline1 = wavy\n", "lines.line1");
  expect_config_error("[orbits]\nseed1 = 1\n", "orbits.seed1");
  expect_config_error("[map]\nbump_radius = 0.2\n", "kind = perturbed");
  expect_config_error("[foliation]\nfamily = horizontal\nn = 2\n", "foliation.n");
  expect_config_error("[numerics\nstep = 1\n", "t.ini:1");
}

TEST(Cli, IndexBandSpiralThree) {
  const CliRun r = run("index " + scenario("band_spiral_3.ini") + " --deterministic");
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], true);
  ASSERT_EQ(j["results"].size(), 3u);
  for (const auto& m : j["results"]) {
    EXPECT_EQ(m["halves"], 3);
    EXPECT_EQ(m["display"], "3/2");
  }
  EXPECT_EQ(j["witness"]["justification"], "StrDaggerSeparated");
  EXPECT_FALSE(j.contains("wall_ms"));
}

TEST(Cli, IndexIsByteStable) {
  const CliRun a = run("index " + scenario("bent.ini") + " --deterministic");
  const CliRun b = run("index " + scenario("bent.ini") + " --deterministic");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST(Cli, HorizontalAndSingleMethod) {
  const CliRun r = run("index " + scenario("horizontal.ini") + " --deterministic");
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  for (const auto& m : j["results"]) EXPECT_EQ(m["halves"], 0);
  EXPECT_EQ(j["witness"]["justification"], "ExplicitModel");
  const CliRun one = run("index " + scenario("horizontal.ini") + " --method leroux");
  const json k = json::parse(one.out);
  ASSERT_EQ(k["results"].size(), 1u);
  EXPECT_EQ(k["results"][0]["method"], "leroux");
  EXPECT_TRUE(k.contains("wall_ms"));
}

TEST(Cli, IntersectingReportsConvention) {
  const CliRun r = run("index " + scenario("intersecting.ini") + " --method foliation --deterministic");
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["results"][0]["halves"], 0);
  EXPECT_EQ(j["results"][0]["reason"], "intersecting");
}

TEST(Cli, PerturbedScenario) {
  const CliRun r = run("index " + scenario("perturbed.ini") + " --deterministic");
  ASSERT_EQ(r.status, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["results"][1]["halves"], 1);
  EXPECT_EQ(j["results"][0]["reason"], "not applicable");
}

TEST(Cli, ExitCodes) {
  const fs::path bad = temp_file("bad.ini", "[numerics]\neps = nope\n");
  const CliRun cfg = run("index " + bad.string());
  EXPECT_EQ(cfg.status, 1);
  EXPECT_EQ(json::parse(cfg.out)["error"]["code"], "ConfigError");
  EXPECT_EQ(run("index /nonexistent/x.ini").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
  // a depth budget too small for the repelling layers fails the computation
  const fs::path shallow = temp_file("shallow.ini", "[foliation]\nn = 5\n[numerics]\nmax_depth = 2\n");
  const CliRun comp = run("index " + shallow.string() + " --method leroux");
  EXPECT_EQ(comp.status, 2) << comp.out;
  EXPECT_EQ(json::parse(comp.out)["results"][0]["error"]["code"], "RefinementExhausted");
}

TEST(Cli, VerifyTheoremASweep) {
  const fs::path out = fs::temp_directory_path() / "leafwind_test_sweep.csv";
  const CliRun r = run("verify-theorem-a --n-range 0..5 --deterministic --jobs 3 --out " + out.string());
  ASSERT_EQ(r.status, 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, report::kCsvHeader);
  int n = 0;
  while (std::getline(in, line)) {
    char oracle[32];
    std::snprintf(oracle, sizeof oracle, "%.12f", 0.5 * n);
    EXPECT_EQ(line, std::to_string(n) + "," + std::to_string(n) + "," + std::to_string(n) + "," +
                        std::to_string(n) + "," + oracle + ",true,0");
    ++n;
  }
  EXPECT_EQ(n, 6);
}

TEST(Cli, VerifySmallRanges) {
  const CliRun zero = run("verify-theorem-a --n-range 0..0 --deterministic");
  EXPECT_EQ(zero.status, 0);
  EXPECT_EQ(zero.out, std::string(report::kCsvHeader) + "\n0,0,0,0,0.000000000000,true,0\n");
  const CliRun one = run("verify-theorem-a --n-range 1..1 --deterministic");
  EXPECT_EQ(one.out, std::string(report::kCsvHeader) + "\n1,1,1,1,0.500000000000,true,0\n");
  EXPECT_EQ(run("verify-theorem-a --n-range 3..1").status, 1);
  EXPECT_EQ(run("verify-theorem-a --n-range three").status, 1);
}

TEST(Cli, WhitneyProps) {
  const CliRun r = run("whitney-props --trials 200");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["seed"], 20240607);
  EXPECT_EQ(j["groups"].size(), 5u);
  const CliRun none = run("whitney-props --trials 0");
  EXPECT_EQ(none.status, 0);
  EXPECT_EQ(json::parse(none.out)["passed"], true);
  const CliRun single = run("whitney-props --trials 100 --singletons");
  const json s = json::parse(single.out);
  EXPECT_EQ(s["groups"][0]["failures"], 0);
}

}  // namespace
