#pragma once

#include <array>

#include "vh/coefficients.hpp"
#include "vh/small_matrix.hpp"
#include "vh/state.hpp"

namespace vh {

/// One-dimensional MV system written with a mass-transport speed `a`:
///   rho_t + a (rho cos th)_x = 0
///   th_t + c cos th th_x - lambda sin th / rho rho_x = 0
/// a = 1 with (c, lambda) = (c2/c1, d/c1) is the rescaled system; a = c1
/// with (c2, d) is the same system in unscaled x.
struct MVSystem {
  double a = 1.0;
  double c = 0.5;
  double lambda = 1.0;

  static MVSystem rescaled(const ModelCoefficients& k) { return {1.0, k.c, k.lambda_r}; }
  static MVSystem physical(const ModelCoefficients& k) { return {k.c1, k.c2, k.lambda}; }

  /// A(rho, theta) of the quasilinear form.
  Mat2 jacobian(const PrimState& u) const;

  /// Characteristic speeds, gamma_1 < gamma_2. Independent of rho.
  std::array<double, 2> speeds(double theta) const;

  /// Right eigenvectors paired with speeds(). Uses the closed forms
  /// (a rho sin, a cos - g1) and (c cos - g2, lambda sin / rho), falling back
  /// to the row-2 form where the first vanishes (theta = pi).
  std::array<Vec2, 2> eigenvectors(const PrimState& u) const;

  /// Jacobian of the flux (a rho cos, c f2 - lambda log rho) with respect to
  /// V = (rho, f1(theta)), f1 = log|tan(theta/2)|.
  Mat2 conservative_jacobian(const PrimState& u) const;

  /// Largest |gamma| over all angles (attained somewhere on (-pi, pi]).
  double max_speed_bound() const;

  /// Angles in (0, pi) where gamma_1 resp. gamma_2 have their interior
  /// extremum (loss of genuine nonlinearity). {theta_1, theta_2}.
  std::array<double, 2> degeneracy_angles() const;

  /// Hyperbolicity discriminant of the relaxation (rho, rho u, rho v) flux
  /// at x-velocity u: a (lambda - (c - c^2 / a) u^2).
  double relaxation_discriminant(double u) const { return c * c * u * u + a * (lambda - c * u * u); }
};

}  // namespace vh
