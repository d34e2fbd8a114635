// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "suites.hpp"

namespace {

using namespace leafwind;
using suites::Tally;

// Pinned tolerances.
constexpr double kOracleTol = 1e-6;
constexpr double kRuntimeBudgetS = 60.0;
constexpr double kGoldenTol = 0x1p-32;
constexpr double kGoldenMuTwoPoint = 0.082205529871937785;
constexpr double kGoldenTauRay = 0.42020174781350744;
constexpr int kNMax = 5;

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict from(const Tally& t) {
  return {t.ok(), std::to_string(t.checks - t.failures) + "/" + std::to_string(t.checks) +
                      (t.failures ? "; first failure: " + t.first_failure : std::string{})};
}

std::vector<TheoremAReport> sweep(double step) {
  std::vector<TheoremAReport> out;
  for (int n = 0; n <= kNMax; ++n) out.push_back(theorem_a_check(build_scenario(band_spiral_spec(n, step))));
  return out;
}

Verdict theorem_a() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reps = sweep(1.0 / 64);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Tally t;
  for (int n = 0; n <= kNMax; ++n) {
    const auto& rep = reps[n];
    t.check(rep.verdict, "n=" + std::to_string(n) + " verdict false");
    for (const auto& o : rep.outcomes) {
      const std::string tag = "n=" + std::to_string(n) + " " + to_string(o.method);
      t.check(o.result && o.result->value.quarters() == 2 * n, tag + " value");
      t.check(o.float_oracle && std::abs(*o.float_oracle - 0.5 * n) < kOracleTol, tag + " float oracle");
    }
  }
  t.check(secs < kRuntimeBudgetS, "runtime " + std::to_string(secs) + " s");
  Verdict v = from(t);
  char buf[64];
  std::snprintf(buf, sizeof buf, "; %.2f s", secs);
  v.detail += buf;
  return v;
}

Verdict per_n(const std::function<Tally(int)>& suite) {
  Tally t;
  for (int n = 0; n <= kNMax; ++n) t.merge(suite(n));
  return from(t);
}

Verdict theta() {
  Tally t;
  t.merge(suites::theta_horizontal_reduction());
  t.merge(suites::theta_equivariance());
  t.merge(suites::theta_continuity());
  t.merge(suites::theta_discontinuity_witness());
  return from(t);
}

Verdict whitney() {
  Tally t;
  const WhitneyPropertyReport rep = run_whitney_properties(1000, 20240607);
  for (const auto& g : rep.groups) t.check(g.failures == 0, g.name + ": " + g.counterexample);
  const double m2 = mu(SampledSet({{0.0, 0.0}, {1.0, 0.0}}), 20).value;
  t.check(std::abs(m2 - kGoldenMuTwoPoint) <= kGoldenTol, "two-point golden " + std::to_string(m2));
  const std::vector<double> schedule{4.0};
  const double ray = tau(horizontal(), {0.0, 0.0}, 20, schedule).back().value;
  t.check(std::abs(ray - kGoldenTauRay) <= kGoldenTol, "ray golden " + std::to_string(ray));
  return from(t);
}

Verdict step_halving() {
  const auto a = sweep(1.0 / 64), b = sweep(1.0 / 128);
  Tally t;
  double worst = 0.0;
  for (int n = 0; n <= kNMax; ++n)
    for (Method m : {Method::PoincareHopf, Method::LeRoux, Method::Foliation}) {
      const auto* oa = a[n].find(m);
      const auto* ob = b[n].find(m);
      const std::string tag = "n=" + std::to_string(n) + " " + to_string(m);
      const bool both = oa && ob && oa->result && ob->result;
      t.check(both && oa->result->value == ob->result->value, tag + " value moved");
      if (both && oa->float_oracle && ob->float_oracle) {
        const double d = std::abs(*oa->float_oracle - *ob->float_oracle);
        worst = std::max(worst, d);
        t.check(d < kOracleTol, tag + " oracle moved by " + std::to_string(d));
      }
    }
  Verdict v = from(t);
  char buf[64];
  std::snprintf(buf, sizeof buf, "; max oracle shift %.3g", worst);
  v.detail += buf;
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"theorem A sweep n=0..5 (exact quarters, oracles, runtime)", theorem_a},
      {"choice independence 5x3x2 per n", [] { return per_n([](int n) { return suites::choice_independence(n); }); }},
      {"Le Roux isotopy invariance, 10 bumps per n", [] { return per_n([](int n) { return suites::isotopy_invariance(n); }); }},
      {"Khalimsky suite", [] { return from(suites::khalimsky_suite()); }},
      {"theta suite", theta},
      {"Brouwer lines, 20 leaves x 100 samples per n", [] { return per_n([](int n) { return suites::brouwer_lines(n); }); }},
      {"Whitney properties and goldens", whitney},
      {"step halving", step_halving},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("criterion %zu %s  %s  [%s]\n", k + 1, v.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
