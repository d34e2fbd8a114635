#pragma once

#include "leafwind/plane.hpp"

namespace leafwind {

/// One classical fourth-order Runge-Kutta step of dp/dt = field(p).
template <class Field>
Point rk4_step(const Field& field, Point p, double h) {
  const Vector k1 = field(p);
  const Vector k2 = field(p + k1 * (0.5 * h));
  const Vector k3 = field(p + k2 * (0.5 * h));
  const Vector k4 = field(p + k3 * h);
  return p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

/// Integrates dp/dt = field(p) over time `duration` (may be negative) with
/// fixed steps no longer than |step|; the last step is shortened to land
/// exactly on `duration`.
template <class Field>
Point integrate(const Field& field, Point p, double duration, double step) {
  if (!(step > 0.0)) throw InvalidArgument("integrate: step must be positive");
  const double sign = duration < 0 ? -1.0 : 1.0;
  const double total = std::abs(duration);
  const auto full = static_cast<long long>(std::floor(total / step));
  for (long long k = 0; k < full; ++k) p = rk4_step(field, p, sign * step);
  const double rest = total - static_cast<double>(full) * step;
  if (rest > 1e-15) p = rk4_step(field, p, sign * rest);
  return p;
}

}  // namespace leafwind
