#pragma once

// Adaptive continuous unwrapping of an angle-valued path on [0,1].

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "leafwind/errors.hpp"

namespace leafwind {

/// Largest admissible |wrapped difference| between consecutive samples.
inline constexpr double kUnwrapGuard = std::numbers::pi / 2;

/// Default bound on how far the midpoint increment of an interval may stray
/// from half the interval increment before the interval is bisected anyway.
inline constexpr double kUnwrapDefect = 0.05;

struct UnwrapResult {
  double start = 0.0;  ///< unwrapped angle at t=0, chosen in (-pi, pi]
  double end = 0.0;    ///< unwrapped angle at t=1
  std::size_t samples = 0;
  int depth = 0;  ///< deepest bisection level used
};

/// Reduces an angle difference into (-pi, pi].
inline double wrap_difference(double d) {
  constexpr double two_pi = 2 * std::numbers::pi;
  d = std::remainder(d, two_pi);
  if (d <= -std::numbers::pi) d += two_pi;
  return d;
}

/// Unwraps t -> angle_at(t) over [0,1]. Starts from `initial_intervals`
/// uniform intervals and bisects any interval whose wrapped angle increment
/// reaches the pi/2 guard. An interval under the guard is still probed at its
/// midpoint: if the two half increments do not add up to the whole, or one
/// half strays from half the whole by more than `defect_tol`, it is bisected
/// too. This catches turns hidden inside layers much thinner than the
/// sampling, which would otherwise alias to a small step the wrong way round.
/// Fails rather than guesses when an interval still violates the guard after
/// `max_depth` bisections.
template <class AngleSampler>
UnwrapResult unwrap_angle_path(AngleSampler&& angle_at, int initial_intervals = 64,
                               int max_depth = 40, double defect_tol = kUnwrapDefect) {
  if (initial_intervals < 1) throw InvalidArgument("unwrap: need at least one interval");
  struct Span {
    double ta, tb, aa, ab;
    int depth;
  };
  UnwrapResult r;
  double a0 = angle_at(0.0);
  double start = std::remainder(a0, 2 * std::numbers::pi);
  if (start <= -std::numbers::pi) start += 2 * std::numbers::pi;
  r.start = start;
  r.samples = 1;
  double acc = start;

  std::vector<Span> stack;
  double prev_t = 0.0, prev_a = a0;
  for (int k = 1; k <= initial_intervals; ++k) {
    const double t = k == initial_intervals ? 1.0 : static_cast<double>(k) / initial_intervals;
    const double a = angle_at(t);
    ++r.samples;
    stack.push_back({prev_t, t, prev_a, a, 0});
    // depth-first, left to right
    while (!stack.empty()) {
      Span s = stack.back();
      stack.pop_back();
      const double d = wrap_difference(s.ab - s.aa);
      const bool guarded = std::abs(d) < kUnwrapGuard;
      if (guarded && defect_tol <= 0.0) {
        acc += d;
        if (s.depth > r.depth) r.depth = s.depth;
        continue;
      }
      if (!guarded && s.depth >= max_depth) throw RefinementExhausted(s.ta);
      const double tm = 0.5 * (s.ta + s.tb);
      const double am = angle_at(tm);
      ++r.samples;
      if (guarded) {
        const double d1 = wrap_difference(am - s.aa), d2 = wrap_difference(s.ab - am);
        if (std::abs(d1 + d2 - d) < 1e-9 && std::abs(d1 - 0.5 * d) <= defect_tol) {
          acc += d;
          if (s.depth + 1 > r.depth) r.depth = s.depth + 1;
          continue;
        }
        if (s.depth >= max_depth) throw RefinementExhausted(s.ta);
      }
      stack.push_back({tm, s.tb, am, s.ab, s.depth + 1});
      stack.push_back({s.ta, tm, s.aa, am, s.depth + 1});
    }
    prev_t = t;
    prev_a = a;
  }
  r.end = acc;
  return r;
}

}  // namespace leafwind
