#pragma once

// Quarter-turn angle classes in Z/4Z with the Khalimsky topology, the
// quantizers sigma / sigma_tilde, and integer lifting of sampled class paths.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "leafwind/errors.hpp"
#include "leafwind/unwrap.hpp"

namespace leafwind {

/// An element of Z/4Z, stored in the window {-1, 0, 1, 2}. Odd classes are
/// the open points of the Khalimsky topology, even classes the closed ones.
enum class KClass : int { MinusOne = -1, Zero = 0, One = 1, Two = 2 };

constexpr int to_int(KClass c) noexcept { return static_cast<int>(c); }

/// Reduces any integer to its class, i.e. mod_4 into the window {-1,0,1,2}.
constexpr KClass mod4(std::int64_t v) noexcept {
  std::int64_t r = ((v % 4) + 4) % 4;  // 0..3
  return r == 3 ? KClass::MinusOne : static_cast<KClass>(static_cast<int>(r));
}

constexpr bool is_odd(KClass c) noexcept { return c == KClass::One || c == KClass::MinusOne; }

inline std::string to_string(KClass c) {
  switch (c) {
    case KClass::MinusOne: return "-1";
    case KClass::Zero: return "0";
    case KClass::One: return "1";
    case KClass::Two: return "2";
  }
  return "?";
}

/// An integer lift value together with the class it lifts.
struct KLift {
  std::int64_t theta = 0;

  KClass origin_class() const noexcept { return mod4(theta); }
};

/// A sampled Z/4Z-valued path.
class KSequence {
 public:
  KSequence(std::vector<KClass> samples, std::vector<double> params)
      : samples_(std::move(samples)), params_(std::move(params)) {
    if (samples_.empty()) throw InvalidArgument("KSequence needs at least one sample");
    if (samples_.size() != params_.size())
      throw InvalidArgument("KSequence samples/params length mismatch");
    for (std::size_t k = 0; k < params_.size(); ++k) {
      if (params_[k] < 0.0 || params_[k] > 1.0)
        throw InvalidArgument("KSequence params must lie in [0,1]");
      if (k > 0 && !(params_[k] > params_[k - 1]))
        throw InvalidArgument("KSequence params must be strictly increasing");
    }
  }

  /// Uniform parametrization over [0,1].
  explicit KSequence(std::vector<KClass> samples)
      : KSequence(samples, uniform_params(samples.size())) {}

  const std::vector<KClass>& samples() const noexcept { return samples_; }
  const std::vector<double>& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return samples_.size(); }

  KSequence reversed() const {
    std::vector<KClass> s(samples_.rbegin(), samples_.rend());
    std::vector<double> p;
    p.reserve(params_.size());
    for (auto it = params_.rbegin(); it != params_.rend(); ++it) p.push_back(1.0 - *it);
    return KSequence(std::move(s), std::move(p));
  }

 private:
  static std::vector<double> uniform_params(std::size_t n) {
    std::vector<double> p(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) p[k] = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    return p;
  }

  std::vector<KClass> samples_;
  std::vector<double> params_;
};

/// Quantizes an angle in [0, 2pi): 0 -> 0, (0,pi) -> 1, pi -> 2, (pi,2pi) -> -1.
/// Angles within tol_axis of 0 (or 2pi) or pi snap to the even classes.
inline KClass sigma(double t, double tol_axis = 0.0) {
  constexpr double pi = std::numbers::pi;
  if (tol_axis < 0.0 || tol_axis >= pi / 4) throw InvalidArgument("sigma: tol_axis out of range");
  t = std::fmod(t, 2 * pi);
  if (t < 0) t += 2 * pi;
  if (t <= tol_axis || 2 * pi - t <= tol_axis) return KClass::Zero;
  if (std::abs(t - pi) <= tol_axis) return KClass::Two;
  return t < pi ? KClass::One : KClass::MinusOne;
}

/// Integer lift of sigma: 2k on t = k*pi, 2k+1 on (k*pi, (k+1)*pi).
/// Equivalently floor(t/pi) + ceil(t/pi). Multiples of pi are recognised up to
/// a few ulps of t/pi so that sigma_tilde(k * pi) == 2k for floating k * pi.
inline std::int64_t sigma_tilde(double t) {
  const double q = t / std::numbers::pi;
  const double r = std::nearbyint(q);
  if (std::abs(q - r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(q)))
    return 2 * static_cast<std::int64_t>(r);
  return 2 * static_cast<std::int64_t>(std::floor(q)) + 1;
}

/// True iff a step a -> b can occur along a Khalimsky-continuous path.
constexpr bool k_step_compatible(KClass a, KClass b) noexcept {
  const int d = ((to_int(b) - to_int(a)) % 4 + 4) % 4;
  return d == 0 || d == 1 || d == 3;
}

/// Stepwise continuation of a lift. Discrete fibres make the continuation
/// unique once theta0 is fixed.
inline std::vector<std::int64_t> lift_sequence(const KSequence& seq, std::int64_t theta0) {
  const auto& s = seq.samples();
  if (mod4(theta0) != s.front())
    throw InvalidArgument("lift_sequence: theta0 does not lift the first sample");
  std::vector<std::int64_t> out;
  out.reserve(s.size());
  out.push_back(theta0);
  for (std::size_t k = 1; k < s.size(); ++k) {
    const int d = ((to_int(s[k]) - to_int(s[k - 1])) % 4 + 4) % 4;
    switch (d) {
      case 0: out.push_back(out.back()); break;
      case 1: out.push_back(out.back() + 1); break;
      case 3: out.push_back(out.back() - 1); break;
      default: throw ForbiddenTransition(k);
    }
  }
  return out;
}

enum class EndpointPolicy {
  /// Endpoint angles must lie within tol_snap of a multiple of pi/2.
  RequireAxis,
  /// Snap when within tol_snap, otherwise quantize the raw angle.
  SnapIfNear,
};

struct LiftOptions {
  int max_depth = 40;
  double tol_snap = 1e-6;
  int initial_intervals = 64;
  EndpointPolicy endpoints = EndpointPolicy::RequireAxis;
};

struct LiftResult {
  std::int64_t theta_start = 0;
  std::int64_t theta_end = 0;
  double unwrapped_start = 0.0;  ///< s~(0), in (-pi, pi]
  double unwrapped_end = 0.0;    ///< s~(1)
  std::size_t samples = 0;
  int depth = 0;

  std::int64_t difference() const noexcept { return theta_end - theta_start; }
};

namespace detail {

inline std::int64_t endpoint_lift(double angle, const LiftOptions& opt, const char* which) {
  constexpr double quarter = std::numbers::pi / 2;
  const double k = std::nearbyint(angle / quarter);
  if (std::abs(angle - k * quarter) <= opt.tol_snap) return static_cast<std::int64_t>(k);
  if (opt.endpoints == EndpointPolicy::RequireAxis)
    throw EndpointNotOnAxisClass(std::string(which) + " angle " + std::to_string(angle) +
                                 " is not within tol_snap of a multiple of pi/2");
  return sigma_tilde(angle);
}

}  // namespace detail

/// Lifts the quantized angle of a continuous angle path. The path is unwrapped
/// under the pi/2 guard, endpoints are snapped per `opt.endpoints`, and the
/// lift at each end is sigma_tilde of the unwrapped angle. The start angle is
/// taken in (-pi, pi], so theta_start is the {-1,0,1,2} representative.
template <class AngleSampler>
LiftResult lift_angle_path(AngleSampler&& angle_at, const LiftOptions& opt = {}) {
  const UnwrapResult u = unwrap_angle_path(angle_at, opt.initial_intervals, opt.max_depth);
  LiftResult r;
  r.unwrapped_start = u.start;
  r.unwrapped_end = u.end;
  r.samples = u.samples;
  r.depth = u.depth;
  r.theta_start = detail::endpoint_lift(u.start, opt, "start");
  r.theta_end = detail::endpoint_lift(u.end, opt, "end");
  if (r.theta_start == -2) {  // start snapped onto -pi; same class as pi
    r.theta_start += 4;
    r.theta_end += 4;
  }
  return r;
}

}  // namespace leafwind
