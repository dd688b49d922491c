#pragma once

#include <cmath>
#include <numbers>

namespace vh {

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

/// Shortest angular distance, in [0, pi].
inline double circular_distance(double a, double b) {
  const double diff = std::abs(wrap_angle(a - b));
  return std::fmin(diff, 2.0 * std::numbers::pi - diff);
}

/// Primitive macroscopic state: density and flow angle.
struct PrimState {
  double rho = 1.0;
  double theta = 0.0;

  friend bool operator==(const PrimState&, const PrimState&) = default;
};

enum class Exec { Serial, Parallel };

}  // namespace vh
