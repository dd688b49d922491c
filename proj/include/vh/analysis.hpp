#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vh/coefficients.hpp"
#include "vh/exact_riemann.hpp"
#include "vh/macro_schemes.hpp"
#include "vh/particle_sim.hpp"

namespace vh {

struct ComparisonReport {
  double l1_rho = 0.0;
  double l1_theta = 0.0;
  double shock_micro = 0.0;
  double shock_macro = 0.0;
  std::vector<std::string> notes;
};

/// Interval [lo, hi] of x in which shock positions are searched.
using Window = std::optional<std::pair<double, double>>;

/// Steepest |rho_{b+1} - rho_b| between bins, refined by a parabola through
/// the three neighbouring differences. NaN if the profile is flat.
double locate_shock(const Profile& p, const Window& window = std::nullopt);

/// L1 norms (times bin width) of the density and circular angle differences.
/// Bins where either theta is undefined are skipped for l1_theta.
ComparisonReport compare_profiles(const Profile& micro, const Profile& macro, const Window& window = std::nullopt);

/// Bin averages of a macro solution: rho averaged exactly over each bin,
/// theta the direction of the averaged flux, circ_var 0.
Profile profile_from_grid(const MacroGrid& g, const std::vector<double>& bin_centers, double bin_width);

/// Self-similar exact solution at time t with the jump at x_jump, sampled at bin centers.
Profile profile_from_fan(const WaveFan& fan, const std::vector<double>& bin_centers, double x_jump, double t);

struct VortexResidual {
  double divergence = 0.0;  // max |div(rho Omega)|
  double momentum = 0.0;    // max |c (Omega.grad) Omega + lambda (Id - Omega x Omega) grad rho / rho|
  double max() const { return divergence > momentum ? divergence : momentum; }
};

/// Residual of the stationary equations for rho = C r^{alpha}, Omega = e_theta
/// with alpha = exponent_scale * c / lambda (rescaled coefficients), by
/// centred differences on the polar grid r in [r_min, r_max] (n_r intervals) x
/// n_angular angles. Evaluated at interior radial nodes.
VortexResidual vortex_residual(double C, const ModelCoefficients& k, double r_min, double r_max, int n_r,
                               int n_angular, double exponent_scale = 1.0);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct EquilibriumReport {
  Verdict histogram = Verdict::Inconclusive;
  Verdict order = Verdict::Inconclusive;
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 0.0;
  double phi_mean = 0.0;
  double phi_target = 0.0;       // c1(d)
  double phi_von_mises = 0.0;    // mean resultant of the circular law
  std::size_t snapshots_used = 0;
  std::vector<double> observed;  // averaged counts per angular bin, rotated to the mean direction
  std::vector<double> expected;
  std::string notes;
};

/// Heading snapshots of a periodic run at noise d. Discards the first third,
/// rotates each snapshot to its mean direction and tests the averaged 36-bin
/// histogram (tail bins merged until every expected count is >= 5) against
/// the circular law; phi_N is compared with c1(d) within phi_tol.
EquilibriumReport equilibrium_checks(const std::vector<std::vector<double>>& heading_snapshots, double d,
                                     double alpha = 0.01, double phi_tol = 0.05);

}  // namespace vh
