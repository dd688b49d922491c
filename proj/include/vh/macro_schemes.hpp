#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vh/coefficients.hpp"
#include "vh/mv_system.hpp"
#include "vh/state.hpp"

namespace vh {

enum class Scheme { Conservative, Splitting, Upwind, SemiConservative };
enum class Boundary { Neumann, Periodic };

/// Rescaled: x' = x / c1 with (1, c, lambda_r). Physical: unscaled x with (c1, c2, d).
enum class Frame { Rescaled, Physical };

Scheme parse_scheme(const std::string& name);  // cons|split|upwind|semi
std::string to_string(Scheme s);
Boundary parse_boundary(const std::string& name);  // neumann|periodic
std::string to_string(Boundary b);
Frame parse_frame(const std::string& name);  // rescaled|physical
std::string to_string(Frame f);

struct MacroGrid {
  double x0 = 0.0;  // left edge of cell 0
  double dx = 0.05;
  std::vector<PrimState> cells;
  Boundary bc = Boundary::Neumann;
  ModelCoefficients coeffs;
  Frame frame = Frame::Rescaled;
  // The conservative scheme's variables see only |theta|; it carries the
  // half-plane as a continuous field transported at c cos(theta), and
  // sign(side) is the sign of theta. Empty until that scheme runs.
  std::vector<double> side;

  std::size_t nx() const { return cells.size(); }
  double center(std::size_t i) const { return x0 + (static_cast<double>(i) + 0.5) * dx; }
  double length() const { return dx * static_cast<double>(cells.size()); }
  MVSystem system() const { return frame == Frame::Rescaled ? MVSystem::rescaled(coeffs) : MVSystem::physical(coeffs); }
  double mass() const;
  void validate() const;
};

/// Piecewise-constant Riemann data with the jump at the domain midpoint.
MacroGrid riemann_grid(const PrimState& left, const PrimState& right, const ModelCoefficients& k, std::size_t nx,
                       double length, Boundary bc, Frame frame = Frame::Rescaled);

struct SchemeConfig {
  Scheme scheme = Scheme::Conservative;
  double dt = 0.02;
  double t_end = 2.0;
  double entropy_fix = 0.05;     // Harten delta as a fraction of the local max |gamma|
  double snapshot_every = 0.0;   // 0: final state only
  Exec exec = Exec::Parallel;
};

/// Per-step monitors filled by the step functions.
struct StepStats {
  double min_rho = 0.0;
  double max_rho = 0.0;
  double norm_defect = 0.0;       // splitting: max | |m|/rho - 1 | after normalization
  double min_discriminant = 0.0;  // splitting: smallest interface hyperbolicity discriminant
};

// Each step throws Error(positivity_lost) when a density falls below kRhoFloor.
inline constexpr double kRhoFloor = 1e-12;

MacroGrid step_conservative(const MacroGrid& g, double dt, double entropy_fix = 0.05, Exec exec = Exec::Parallel,
                            StepStats* stats = nullptr);
MacroGrid step_splitting(const MacroGrid& g, double dt, double entropy_fix = 0.05, Exec exec = Exec::Parallel,
                         StepStats* stats = nullptr);
MacroGrid step_upwind(const MacroGrid& g, double dt, Exec exec = Exec::Parallel, StepStats* stats = nullptr);
MacroGrid step_semiconservative(const MacroGrid& g, double dt, Exec exec = Exec::Parallel,
                                StepStats* stats = nullptr);
MacroGrid step(const MacroGrid& g, const SchemeConfig& cfg, double dt, StepStats* stats = nullptr);

/// A+ and A- (both with nonnegative spectrum) of A(u) from the explicit eigenvectors.
struct SplitJacobian {
  Mat2 plus, minus;
};
SplitJacobian split_jacobian(const MVSystem& sys, const PrimState& u);

/// dt/dx times the largest characteristic speed over all angles.
double courant_number(const MacroGrid& g, double dt);

struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  double mass = 0.0;
  double courant = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
};

struct Snapshot {
  double t = 0.0;
  MacroGrid grid;
};

struct RunResult {
  MacroGrid final_grid;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<Snapshot> snapshots;  // includes t = 0 and the final time
  std::vector<std::string> warnings;
  double courant = 0.0;
  double max_norm_defect = 0.0;
  double min_discriminant = 0.0;  // splitting runs only, +inf otherwise
};

RunResult run(const MacroGrid& initial, const SchemeConfig& cfg);

}  // namespace vh
