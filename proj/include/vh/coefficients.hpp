#pragma once

#include <vector>

namespace vh {

/// Nodal solution of the weighted elliptic problem
///   -(1-x^2) d/dx[ e^{x/d} (1-x^2) dg/dx ] + e^{x/d} g = -(1-x^2)^{3/2} e^{x/d}
/// on (-1, 1) with g(+-1) = 0.
struct EllipticSolution {
  std::vector<double> nodes;     // uniform, -1 .. 1 inclusive
  std::vector<double> g_values;  // g at nodes, 0 at both ends
  std::vector<double> h_values;  // h = g / sqrt(1-x^2), bounded up to the ends
  double d = 0.0;
  double dx = 0.0;
  double residual = 0.0;  // relative residual of the linear solve

  /// Linear interpolation of h at x in [-1, 1].
  double h_at(double x) const;
};

/// Coefficients of the macroscopic model for one noise intensity d.
/// c and lambda_r are the values after the x' = x / c1 rescaling.
struct ModelCoefficients {
  double d = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double lambda = 0.0;
  double c = 0.0;
  double lambda_r = 0.0;
};

/// Below this d (1/d > 350) coth(1/d) is 1 to machine precision and
/// c1 = 1 - d is returned directly.
inline constexpr double kCothSaturation = 350.0;

EllipticSolution solve_g(double d, double dx = 1e-3);

double c1_closed_form(double d);
double c1_quadrature(double d, int n = 1024);
double c2_from_g(double d, const EllipticSolution& g, int n = 1024);

/// Bundles c1 (closed form), c2 (FEM + quadrature) and lambda = d.
ModelCoefficients make_coefficients(double d, double dx = 1e-3, int n = 1024);

}  // namespace vh
