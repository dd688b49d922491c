#pragma once

#include <array>
#include <string>

#include "vh/coefficients.hpp"
#include "vh/mv_system.hpp"
#include "vh/small_matrix.hpp"
#include "vh/state.hpp"

namespace vh {

struct CharField {
  int index = 1;
  double speed = 0.0;
  Vec2 right_eigenvector{};
};

enum class WaveKind { Shock, Rarefaction };

/// One wave of a Riemann fan. For a shock speed_tail == speed_head == s.
/// For a rarefaction speed_tail is the slow (left) edge.
struct Wave {
  int family = 1;
  WaveKind kind = WaveKind::Rarefaction;
  double speed_tail = 0.0;
  double speed_head = 0.0;
  double strength = 0.0;          // |log rho jump| + |theta jump|
  bool degenerate_field = false;  // theta path crosses an extremum of gamma_p
  bool lax_admissible = true;
};

struct WaveFan {
  PrimState left, middle, right;
  Wave wave1, wave2;
  MVSystem system;

  double min_speed() const { return wave1.speed_tail; }
  double max_speed() const { return wave2.speed_head; }
};

/// Both components of the Rankine-Hugoniot speed. `s` is the mass-equation
/// speed; `s_direction` the f1-equation speed (NaN when f1 does not jump).
struct ShockSpeed {
  double s = 0.0;
  double s_direction = 0.0;
  double relative_mismatch = 0.0;
};

// The coefficient overloads act on the rescaled system (c, lambda_r).

Mat2 jacobian(const PrimState& u, const ModelCoefficients& k);

std::array<CharField, 2> eigen(const PrimState& u, const MVSystem& sys);
std::array<CharField, 2> eigen(const PrimState& u, const ModelCoefficients& k);

/// I_p(rho, theta) = log rho - int_{theta_ref}^{theta} (rarefaction integrand of family p).
double riemann_invariant(const PrimState& u, int family, double theta_ref, const MVSystem& sys);
double riemann_invariant(const PrimState& u, int family, double theta_ref, const ModelCoefficients& k);

/// Point with angle theta_target on the integral curve of family p through anchor.
PrimState rarefaction_curve(const PrimState& anchor, int family, double theta_target, const MVSystem& sys);
PrimState rarefaction_curve(const PrimState& anchor, int family, double theta_target,
                            const ModelCoefficients& k);

/// Shock-curve relation of the conservative (rho, f1) form; zero iff the two
/// states satisfy both jump conditions for a common speed.
double hugoniot_residual(const PrimState& left, const PrimState& right, const MVSystem& sys);
double hugoniot_residual(const PrimState& left, const PrimState& right, const ModelCoefficients& k);

ShockSpeed shock_speed(const PrimState& left, const PrimState& right, const MVSystem& sys);
ShockSpeed shock_speed(const PrimState& left, const PrimState& right, const ModelCoefficients& k);

/// Density of the state with angle theta on the family-p branch of the
/// Hugoniot locus through anchor.
double hugoniot_density(const PrimState& anchor, int family, double theta, const MVSystem& sys);
double hugoniot_density(const PrimState& anchor, int family, double theta, const ModelCoefficients& k);

WaveFan solve_riemann(const PrimState& left, const PrimState& right, const MVSystem& sys);
WaveFan solve_riemann(const PrimState& left, const PrimState& right, const ModelCoefficients& k);

/// Self-similar solution at xi = x / t.
PrimState sample(const WaveFan& fan, double xi);

std::string describe(const WaveFan& fan);

}  // namespace vh
