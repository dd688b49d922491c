// vicsek-hydro: command-line front end for the coefficient, Riemann, macro,
// particle and comparison tools.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vh/analysis.hpp"
#include "vh/csv.hpp"
#include "vh/error.hpp"
#include "vh/exact_riemann.hpp"
#include "vh/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vh;

namespace {

std::string default_out() {
  const char* env = std::getenv("VH_OUTPUT_DIR");
  return env && *env ? env : "vh-out";
}

PrimState parse_state(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(Errc::usage, "state must be rho,theta: '" + s + "'");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(Errc::usage, "state must be rho,theta: '" + s + "'");
  }
}

json coeff_row(double d, double dx, int quad) {
  const ModelCoefficients k = make_coefficients(d, dx, quad);
  const MVSystem sys = MVSystem::rescaled(k);
  const auto deg = sys.degeneracy_angles();
  return {{"d", d},
          {"c1", k.c1},
          {"c1_quadrature", c1_quadrature(d, quad)},
          {"c2", k.c2},
          {"lambda", k.lambda},
          {"c", k.c},
          {"lambda_r", k.lambda_r},
          {"max_speed", sys.max_speed_bound()},
          {"hyperbolicity_bound", std::sqrt(k.lambda_r / (k.c - k.c * k.c))},
          {"degeneracy_angles", {deg[0], deg[1]}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Macroscopic and particle Vicsek dynamics"};
  app.require_subcommand(1);

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "Model coefficients c1, c2, lambda");
  std::vector<double> c_d{1.0};
  double c_dx = 1e-3;
  int c_quad = 1024;
  std::string c_sweep;
  bool c_log = false;
  coeffs->add_option("--d", c_d, "Noise intensities");
  coeffs->add_option("--dx", c_dx, "Mesh size of the elliptic solve");
  coeffs->add_option("--quad", c_quad, "Quadrature nodes");
  coeffs->add_option("--sweep", c_sweep, "d0:d1:n sweep (overrides --d)");
  coeffs->add_flag("--log", c_log, "Logarithmic sweep spacing");

  // riemann
  auto* riem = app.add_subcommand("riemann", "Exact Riemann fan");
  double r_d = 1.0, r_t = 2.0, r_length = 10.0;
  std::size_t r_nx = 200;
  std::string r_left, r_right, r_out;
  riem->add_option("--d", r_d);
  riem->add_option("--left", r_left, "rho,theta")->required();
  riem->add_option("--right", r_right, "rho,theta")->required();
  riem->add_option("--t", r_t, "Sampling time");
  riem->add_option("--nx", r_nx, "Sample points");
  riem->add_option("--length", r_length, "Domain length, jump at the middle");
  riem->add_option("--out", r_out, "CSV of the sampled solution");

  // macro
  auto* mac = app.add_subcommand("macro", "Finite volume run of a Riemann problem");
  double m_d = 1.0, m_length = 10.0, m_fix = 0.05, m_snap = 0.0;
  std::size_t m_nx = 200;
  SchemeConfig m_cfg;
  std::string m_left, m_right, m_scheme = "cons", m_bc = "neumann", m_frame = "rescaled", m_out = default_out();
  bool m_serial = false;
  mac->add_option("--d", m_d);
  mac->add_option("--left", m_left)->required();
  mac->add_option("--right", m_right)->required();
  mac->add_option("--scheme", m_scheme, "cons|split|upwind|semi");
  mac->add_option("--nx", m_nx);
  mac->add_option("--length", m_length);
  mac->add_option("--dt", m_cfg.dt);
  mac->add_option("--t-end", m_cfg.t_end);
  mac->add_option("--bc", m_bc, "neumann|periodic");
  mac->add_option("--frame", m_frame, "rescaled|physical");
  mac->add_option("--entropy-fix", m_fix);
  mac->add_option("--snapshot-every", m_snap);
  mac->add_flag("--serial", m_serial);
  mac->add_option("--out", m_out);

  // micro
  auto* mic = app.add_subcommand("micro", "Particle ensemble of a Riemann problem");
  MicroConfig mc;
  std::string p_left = "1,1", p_right = "1,-1", p_out = default_out();
  bool p_serial = false;
  mic->add_option("--N", mc.N);
  mic->add_option("--d", mc.d);
  mic->add_option("--eps", mc.eps);
  mic->add_option("--R", mc.R);
  mic->add_option("--Lx", mc.Lx);
  mic->add_option("--Ly", mc.Ly);
  mic->add_option("--dt", mc.dt);
  mic->add_option("--T", mc.T);
  mic->add_option("--left", p_left);
  mic->add_option("--right", p_right);
  mic->add_option("--bins", mc.bins);
  mic->add_option("--ensemble", mc.ensemble);
  mic->add_option("--seed", mc.seed);
  mic->add_option("--snapshot-every", mc.snapshot_every);
  mic->add_flag("--serial", p_serial);
  mic->add_option("--out", p_out);

  // compare
  auto* cmp = app.add_subcommand("compare", "Distance between a particle and a macro profile");
  std::string k_micro, k_macro, k_out;
  std::vector<double> k_window;
  cmp->add_option("--micro", k_micro)->required()->check(CLI::ExistingFile);
  cmp->add_option("--macro", k_macro)->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", k_out, "JSON report (stdout if omitted)");
  cmp->add_option("--window", k_window, "lo hi of the shock search")->expected(2);

  // vortex
  auto* vor = app.add_subcommand("vortex", "Residual of the radial vortex under grid refinement");
  double v_d = 1.0, v_C = 1.0, v_rmin = 1.0, v_rmax = 2.0, v_scale = 1.0;
  int v_nr = 200, v_nth = 200, v_levels = 5;
  vor->add_option("--d", v_d);
  vor->add_option("--C", v_C);
  vor->add_option("--nr", v_nr);
  vor->add_option("--ntheta", v_nth);
  vor->add_option("--r-min", v_rmin);
  vor->add_option("--r-max", v_rmax);
  vor->add_option("--levels", v_levels, "Number of grid doublings");
  vor->add_option("--exponent-scale", v_scale, "Multiplies the exponent c/lambda");

  // run
  auto* runc = app.add_subcommand("run", "Run a scenario suite");
  std::string s_path, s_out = default_out();
  SuiteOptions s_opts;
  std::uint64_t s_seed = 0;
  runc->add_option("suite", s_path)->required()->check(CLI::ExistingFile);
  runc->add_option("--out", s_out);
  runc->add_flag("--skip-micro", s_opts.skip_micro);
  runc->add_flag("--paper-scale", s_opts.paper_scale);
  runc->add_option("--only", s_opts.only);
  runc->add_option("--workers", s_opts.workers);
  auto* seed_opt = runc->add_option("--seed", s_seed, "Overrides every scenario seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*coeffs) {
      std::vector<double> ds = c_d;
      if (!c_sweep.empty()) {
        double d0, d1;
        int n;
        char c1, c2;
        std::istringstream ss(c_sweep);
        if (!(ss >> d0 >> c1 >> d1 >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(d0 > 0) || !(d1 > 0))
          throw Error(Errc::usage, "--sweep expects d0:d1:n");
        ds.clear();
        for (int i = 0; i < n; ++i) {
          const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
          ds.push_back(c_log ? d0 * std::pow(d1 / d0, f) : d0 + (d1 - d0) * f);
        }
      }
      json rows = json::array();
      for (double d : ds) rows.push_back(coeff_row(d, c_dx, c_quad));
      std::cout << rows.dump(2) << '\n';
    } else if (*riem) {
      const ModelCoefficients k = make_coefficients(r_d);
      const WaveFan fan = solve_riemann(parse_state(r_left), parse_state(r_right), k);
      std::cout << describe(fan);
      if (!r_out.empty()) {
        std::vector<double> xs;
        for (std::size_t i = 0; i < r_nx; ++i) xs.push_back((i + 0.5) * r_length / static_cast<double>(r_nx));
        write_profile_csv(r_out, profile_from_fan(fan, xs, 0.5 * r_length, r_t));
      }
    } else if (*mac) {
      const ModelCoefficients k = make_coefficients(m_d);
      const MacroGrid g = riemann_grid(parse_state(m_left), parse_state(m_right), k, m_nx, m_length,
                                       parse_boundary(m_bc), parse_frame(m_frame));
      m_cfg.scheme = parse_scheme(m_scheme);
      m_cfg.entropy_fix = m_fix;
      m_cfg.snapshot_every = m_snap;
      m_cfg.exec = m_serial ? Exec::Serial : Exec::Parallel;
      const RunResult r = run(g, m_cfg);
      fs::create_directories(m_out);
      const std::string stem = (fs::path(m_out) / ("macro_" + m_scheme)).string();
      write_grid_csv(stem + ".csv", r.final_grid);
      for (std::size_t i = 0; i < r.snapshots.size(); ++i)
        write_grid_csv(stem + "_snap" + std::to_string(i) + ".csv", r.snapshots[i].grid);
      std::ofstream diag(stem + "_diagnostics.csv");
      diag << "step,t,mass,courant,min_rho,max_rho\n";
      for (const auto& row : r.diagnostics)
        diag << row.step << ',' << format_number(row.t) << ',' << format_number(row.mass) << ','
             << format_number(row.courant) << ',' << format_number(row.min_rho) << ',' << format_number(row.max_rho)
             << '\n';
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "courant " << r.courant << ", mass " << g.mass() << " -> " << r.final_grid.mass() << ", wrote "
                << stem << ".csv\n";
    } else if (*mic) {
      mc.left = parse_state(p_left);
      mc.right = parse_state(p_right);
      mc.exec = p_serial ? Exec::Serial : Exec::Parallel;
      const MicroResult r = run_micro(mc);
      fs::create_directories(p_out);
      for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        const std::string name = i + 1 == r.snapshots.size() ? "micro.csv" : "micro_snap" + std::to_string(i) + ".csv";
        write_profile_csv((fs::path(p_out) / name).string(), r.snapshots[i]);
      }
      std::ofstream order(fs::path(p_out) / "order.csv");
      order << "t,phi\n";
      for (std::size_t i = 0; i < r.order_times.size(); ++i)
        order << format_number(r.order_times[i]) << ',' << format_number(r.order_param[i]) << '\n';
      std::cout << "wrote " << (fs::path(p_out) / "micro.csv").string() << '\n';
    } else if (*cmp) {
      Window w;
      if (k_window.size() == 2) w = std::make_pair(k_window[0], k_window[1]);
      const ComparisonReport rep = compare_profiles(read_profile_csv(k_micro), read_profile_csv(k_macro), w);
      const json j = {{"l1_rho", rep.l1_rho},
                      {"l1_theta", rep.l1_theta},
                      {"shock_micro", rep.shock_micro},
                      {"shock_macro", rep.shock_macro},
                      {"notes", rep.notes}};
      if (k_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::ofstream(k_out) << j.dump(2) << '\n';
      }
    } else if (*vor) {
      const ModelCoefficients k = make_coefficients(v_d);
      json rows = json::array();
      double prev = 0.0;
      for (int l = 0; l < v_levels; ++l) {
        const int f = 1 << l;
        const VortexResidual r = vortex_residual(v_C, k, v_rmin, v_rmax, v_nr * f, v_nth * f, v_scale);
        json row = {{"nr", v_nr * f}, {"ntheta", v_nth * f}, {"divergence", r.divergence}, {"momentum", r.momentum}};
        if (l > 0) row["ratio"] = prev / r.max();
        prev = r.max();
        rows.push_back(row);
      }
      std::cout << rows.dump(2) << '\n';
    } else if (*runc) {
      if (seed_opt->count()) s_opts.seed = s_seed;
      const auto suite = load_suite(s_path);
      const SuiteResult res = run_suite(suite, s_out, s_opts, &std::cerr);
      std::cerr << res.scenarios.size() - res.failed() << "/" << res.scenarios.size() << " scenarios ok, summary in "
                << (fs::path(s_out) / "summary.json").string() << '\n';
      return res.failed() ? 1 : 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::usage || e.code() == Errc::parse ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
