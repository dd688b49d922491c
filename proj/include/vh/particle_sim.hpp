#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "vh/small_matrix.hpp"
#include "vh/state.hpp"

namespace vh {

/// Vicsek particles in a periodic box, structure-of-arrays.
struct ParticleEnsemble {
  std::vector<double> x, y, theta;
  double Lx = 1.0, Ly = 1.0;
  double R = 0.5;
  double d = 0.2;
  double eps = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t step_count = 0;  // noise stream counter
  double particle_mass = 1.0;    // macroscopic mass carried by one particle (rho * area)

  std::size_t size() const { return theta.size(); }
  void validate() const;
};

/// Empty box with the given geometry; R <= min(Lx, Ly) / 2 is required.
ParticleEnsemble make_ensemble(double Lx, double Ly, double R, double d, double eps, std::uint64_t seed);

/// Minimal-image offset for |dx| < 1.5 L (always the case for two points in the box).
inline double min_image(double dx, double L) {
  return dx + (dx > 0.5 * L ? -L : (dx < -0.5 * L ? L : 0.0));
}

inline double periodic_dist2(double dx, double dy, double Lx, double Ly) {
  dx = min_image(dx, Lx);
  dy = min_image(dy, Ly);
  return dx * dx + dy * dy;
}

/// Indices j with |x_j - x_k| <= R (periodic), k included, ascending. Cell list with cells >= R.
std::vector<std::size_t> neighbours(const ParticleEnsemble& e, std::size_t k);

/// J_k / |J_k|, falling back to omega_k when J_k = 0.
Vec2 mean_direction(const ParticleEnsemble& e, std::size_t k);

/// J_k = sum of omega_j over the neighbourhood of every particle.
/// Serial: reference cell list. Parallel: row prefix-sum kernel under OpenMP.
struct NeighbourSums {
  std::vector<double> jx, jy;
};
NeighbourSums neighbour_sums(const ParticleEnsemble& e, Exec exec);

/// Implicit geometric alignment plus noise, with kappa = dt / eps:
///   B = omega + (omega_bar - omega) kappa / 2,
///   theta += 2 angle(omega, B) + sqrt(2 d kappa) xi.
/// `noise` = false drops the random term.
void step_angles(ParticleEnsemble& e, double dt, Exec exec = Exec::Parallel, bool noise = true);
void step_angles(ParticleEnsemble& e, double dt, const NeighbourSums& sums, bool noise = true);
void step_positions(ParticleEnsemble& e, double dt);
void step(ParticleEnsemble& e, double dt, Exec exec = Exec::Parallel);

/// Riemann initial data: round(N rho_l / (rho_l + rho_r)) particles uniform on
/// the left half, the rest on the right half, headings Von Mises around
/// theta_l / theta_r. particle_mass = (rho_l + rho_r) Lx Ly / (2N).
ParticleEnsemble init_riemann(std::size_t N, const PrimState& left, const PrimState& right, double Lx, double Ly,
                              double R, double d, double eps, std::uint64_t seed);

/// Uniform positions and uniform headings on the whole box.
ParticleEnsemble init_uniform(std::size_t N, double Lx, double Ly, double R, double d, double eps, std::uint64_t seed);

/// Headings every `snapshot_every` time units (including t = 0) and phi_N after every step.
struct HeadingTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> headings;
  std::vector<double> order;  // phi_N at t = 0, dt, 2 dt, ...
};
HeadingTrajectory run_headings(ParticleEnsemble e, double dt, double T, double snapshot_every,
                               Exec exec = Exec::Parallel);

/// Binned 1D field. Undefined theta / circ_var (empty bins) are NaN.
struct Profile {
  std::vector<double> bin_centers;
  std::vector<double> rho;
  std::vector<double> theta_mean;
  std::vector<double> circ_var;
  std::size_t n_ensemble = 1;

  std::size_t size() const { return bin_centers.size(); }
  double bin_width() const;
};

/// Cloud-in-cell deposition on nbins periodic x-bins of [0, Lx).
/// `mass` (optional) receives the raw per-bin particle weights.
Profile deposit(const ParticleEnsemble& e, std::size_t nbins, std::vector<double>* mass = nullptr);

Profile ensemble_average(const std::vector<Profile>& runs);

/// |sum omega_k| / N.
double order_parameter(const ParticleEnsemble& e);

struct MicroConfig {
  std::size_t N = 100000;
  double d = 0.2;
  double eps = 0.1;
  double R = 0.5;
  double Lx = 10.0, Ly = 1.0;
  double dt = 0.01;
  double T = 2.0;
  PrimState left{1.0, 1.0}, right{1.0, -1.0};
  std::size_t bins = 100;
  std::size_t ensemble = 10;
  std::uint64_t seed = 1;
  double snapshot_every = 0.0;  // 0: final only
  Exec exec = Exec::Parallel;
};

struct MicroResult {
  std::vector<double> snapshot_times;
  std::vector<Profile> snapshots;  // ensemble averaged, aligned with snapshot_times
  std::vector<double> order_times;
  std::vector<double> order_param;  // ensemble mean of phi_N per step
};

MicroResult run_micro(const MicroConfig& cfg);

}  // namespace vh
