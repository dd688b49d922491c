#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vh/macro_schemes.hpp"
#include "vh/state.hpp"

namespace vh {

struct MacroParams {
  std::size_t nx = 200;
  double length = 10.0;
  double dt = 0.02;
  double t_end = 2.0;
  Boundary bc = Boundary::Neumann;
};

/// Particle ensemble settings. The desk-scale N / ensemble are used unless
/// the suite runs at full scale (--paper-scale). The macro solutions compared with the
/// particles use the physical frame, periodic boundaries and macro_nx cells
/// over Lx.
struct MicroParams {
  std::size_t N = 100000;
  std::size_t ensemble = 10;
  std::size_t full_N = 1000000;
  std::size_t full_ensemble = 100;
  double eps = 0.1;
  double R = 0.5;
  double dt = 0.01;
  double t_end = 2.0;
  double Lx = 10.0;
  double Ly = 1.0;
  std::size_t bins = 100;
  std::size_t macro_nx = 400;
  double macro_dt = 0.01;
};

struct Scenario {
  std::string name;
  double d = 1.0;
  PrimState left, right;
  bool exact = true;  // compare the macro runs with the exact fan
  std::vector<Scheme> schemes{Scheme::Conservative, Scheme::Splitting, Scheme::Upwind, Scheme::SemiConservative};
  MacroParams macro;
  std::optional<MicroParams> micro;
  std::uint64_t seed = 1;
};

/// Parses a suite document. `source` names it in error messages.
std::vector<Scenario> parse_suite(const std::string& text, const std::string& source = "<string>");
std::vector<Scenario> load_suite(const std::string& path);

struct SuiteOptions {
  bool skip_micro = false;
  bool paper_scale = false;
  std::vector<std::string> only;      // empty: all scenarios
  std::optional<std::uint64_t> seed;  // overrides every scenario seed
  unsigned workers = 1;
  Exec exec = Exec::Parallel;
};

struct ScenarioOutcome {
  std::string name;
  bool ok = true;
  std::vector<std::string> errors;
};

struct SuiteResult {
  std::vector<ScenarioOutcome> scenarios;
  std::size_t failed() const;
};

/// Runs the selected scenarios and writes <outdir>/<name>/*.csv and
/// <outdir>/summary.json. Output is deterministic for fixed seeds. A failing
/// scenario is recorded and the others still run.
SuiteResult run_suite(const std::vector<Scenario>& suite, const std::string& outdir, const SuiteOptions& opts,
                      std::ostream* log = nullptr);

}  // namespace vh
