#pragma once

#include "vh/rng.hpp"

namespace vh {

/// Below this argument the Bessel functions use their power series,
/// above it the large-argument asymptotic expansion.
inline constexpr double kBesselSwitch = 20.0;

/// e^{-z} I0(z) and e^{-z} I1(z) for z >= 0.
double bessel_i0e(double z);
double bessel_i1e(double z);
double bessel_i0(double z);  // overflows past z ~ 700

/// Circular law C exp(cos(a - center) / d), C^{-1} = 2 pi I0(1/d).
struct VonMises {
  double d = 1.0;
  double center = 0.0;

  explicit VonMises(double d_, double center_ = 0.0);

  double pdf(double angle) const;
  /// P(wrap(X - center) <= wrap(angle - center)), the deviation taken in (-pi, pi].
  double cdf(double angle) const;
  /// Mean resultant length I1(1/d) / I0(1/d).
  double mean_resultant() const;
  /// Exact draw (Best-Fisher rejection), wrapped to (-pi, pi].
  double sample(StreamRng& rng) const;
};

double von_mises_pdf(const VonMises& vm, double angle);

}  // namespace vh
