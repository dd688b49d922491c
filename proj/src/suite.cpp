#include "vh/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "vh/analysis.hpp"
#include "vh/csv.hpp"
#include "vh/error.hpp"
#include "vh/exact_riemann.hpp"

namespace vh {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Ctx {
  std::string source;
  std::string where(const YAML::Node& n) const {
    const auto m = n.Mark();
    return m.line >= 0 ? source + ":" + std::to_string(m.line + 1) : source;
  }
};

void check_keys(const Ctx& ctx, const YAML::Node& n, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!n.IsMap()) throw Error(Errc::parse, ctx.where(n) + ": " + what + " must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw Error(Errc::parse, ctx.where(kv.first) + ": unknown key '" + key + "' in " + what);
  }
}

template <class T>
T scalar(const Ctx& ctx, const YAML::Node& parent, const char* key, const char* kind) {
  const YAML::Node n = parent[key];
  try {
    if (!n.IsScalar()) throw YAML::BadConversion(n.Mark());
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(Errc::parse, ctx.where(n) + ": key '" + key + "' expects " + kind);
  }
}

template <class T>
void maybe(const Ctx& ctx, const YAML::Node& parent, const char* key, T& out) {
  if (!parent[key]) return;
  if constexpr (std::is_same_v<T, double>)
    out = scalar<double>(ctx, parent, key, "a number");
  else if constexpr (std::is_same_v<T, bool>)
    out = scalar<bool>(ctx, parent, key, "true or false");
  else if constexpr (std::is_same_v<T, std::string>)
    out = scalar<std::string>(ctx, parent, key, "a string");
  else {
    const double v = scalar<double>(ctx, parent, key, "a non-negative integer");
    if (v < 0 || v != std::floor(v))
      throw Error(Errc::parse, ctx.where(parent[key]) + ": key '" + key + "' expects a non-negative integer");
    out = static_cast<T>(v);
  }
}

PrimState parse_state(const Ctx& ctx, const YAML::Node& n, const char* key) {
  if (!n) throw Error(Errc::parse, ctx.source + ": missing key '" + key + "'");
  check_keys(ctx, n, {"rho", "theta"}, key);
  if (!n["rho"] || !n["theta"]) throw Error(Errc::parse, ctx.where(n) + ": " + key + " needs rho and theta");
  PrimState s{scalar<double>(ctx, n, "rho", "a number"), scalar<double>(ctx, n, "theta", "a number")};
  if (!(s.rho > 0.0)) throw Error(Errc::parse, ctx.where(n) + ": " + key + ".rho must be positive");
  return s;
}

template <class F>
auto wrap_value(const Ctx& ctx, const YAML::Node& n, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::parse) throw;
    throw Error(Errc::parse, ctx.where(n) + ": " + e.what());
  }
}

Scenario parse_scenario(const Ctx& ctx, const YAML::Node& n) {
  check_keys(ctx, n, {"name", "d", "left", "right", "exact", "schemes", "macro", "micro", "seed"}, "scenario");
  Scenario s;
  if (!n["name"] || !n["d"]) throw Error(Errc::parse, ctx.where(n) + ": scenario needs name and d");
  s.name = scalar<std::string>(ctx, n, "name", "a string");
  if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos)
    throw Error(Errc::parse, ctx.where(n["name"]) + ": invalid scenario name '" + s.name + "'");
  s.d = scalar<double>(ctx, n, "d", "a number");
  if (!(s.d > 0.0)) throw Error(Errc::parse, ctx.where(n["d"]) + ": d must be positive");
  s.left = parse_state(ctx, n["left"], "left");
  s.right = parse_state(ctx, n["right"], "right");
  maybe(ctx, n, "exact", s.exact);
  maybe(ctx, n, "seed", s.seed);
  if (const auto sch = n["schemes"]) {
    if (!sch.IsSequence() || sch.size() == 0)
      throw Error(Errc::parse, ctx.where(sch) + ": schemes must be a non-empty list");
    s.schemes.clear();
    for (const auto& x : sch) s.schemes.push_back(wrap_value(ctx, x, [&] { return parse_scheme(x.as<std::string>()); }));
  }
  if (const auto m = n["macro"]) {
    check_keys(ctx, m, {"nx", "length", "dt", "t_end", "bc"}, "macro");
    maybe(ctx, m, "nx", s.macro.nx);
    maybe(ctx, m, "length", s.macro.length);
    maybe(ctx, m, "dt", s.macro.dt);
    maybe(ctx, m, "t_end", s.macro.t_end);
    if (m["bc"]) s.macro.bc = wrap_value(ctx, m["bc"], [&] { return parse_boundary(m["bc"].as<std::string>()); });
    if (s.macro.nx < 4 || !(s.macro.length > 0) || !(s.macro.dt > 0) || !(s.macro.t_end >= 0))
      throw Error(Errc::parse, ctx.where(m) + ": invalid macro parameters");
  }
  if (const auto m = n["micro"]) {
    check_keys(ctx, m,
               {"N", "ensemble", "full_N", "full_ensemble", "eps", "R", "dt", "t_end", "Lx", "Ly", "bins",
                "macro_nx", "macro_dt"},
               "micro");
    MicroParams p;
    maybe(ctx, m, "N", p.N);
    maybe(ctx, m, "ensemble", p.ensemble);
    maybe(ctx, m, "full_N", p.full_N);
    maybe(ctx, m, "full_ensemble", p.full_ensemble);
    maybe(ctx, m, "eps", p.eps);
    maybe(ctx, m, "R", p.R);
    maybe(ctx, m, "dt", p.dt);
    maybe(ctx, m, "t_end", p.t_end);
    maybe(ctx, m, "Lx", p.Lx);
    maybe(ctx, m, "Ly", p.Ly);
    maybe(ctx, m, "bins", p.bins);
    maybe(ctx, m, "macro_nx", p.macro_nx);
    maybe(ctx, m, "macro_dt", p.macro_dt);
    if (p.N == 0 || p.ensemble == 0 || p.bins < 2 || p.macro_nx < 4 || !(p.eps > 0) || !(p.R > 0) || !(p.dt > 0) ||
        !(p.t_end > 0) || !(p.Lx > 0) || !(p.Ly > 0) || !(p.macro_dt > 0) || 2 * p.R > std::min(p.Lx, p.Ly))
      throw Error(Errc::parse, ctx.where(m) + ": invalid micro parameters");
    s.micro = p;
  }
  return s;
}

json state_json(const PrimState& u) { return {{"rho", u.rho}, {"theta", u.theta}}; }

json wave_json(const Wave& w) {
  return {{"family", w.family},
          {"kind", w.kind == WaveKind::Shock ? "shock" : "rarefaction"},
          {"speed_tail", w.speed_tail},
          {"speed_head", w.speed_head},
          {"strength", w.strength},
          {"degenerate_field", w.degenerate_field},
          {"lax_admissible", w.lax_admissible}};
}

double l1_grid(const MacroGrid& a, const Profile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.nx(); ++i) s += std::abs(a.cells[i].rho - b.rho[i]) * a.dx;
  return s;
}

Profile grid_profile(const MacroGrid& g) {
  Profile p;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    p.bin_centers.push_back(g.center(i));
    p.rho.push_back(g.cells[i].rho);
    p.theta_mean.push_back(g.cells[i].theta);
    p.circ_var.push_back(0.0);
  }
  return p;
}

json run_scenario(const Scenario& sc, const fs::path& dir, const SuiteOptions& opts, ScenarioOutcome& outcome) {
  fs::create_directories(dir);
  const ModelCoefficients k = make_coefficients(sc.d);
  json j;
  j["d"] = sc.d;
  j["left"] = state_json(sc.left);
  j["right"] = state_json(sc.right);
  j["coefficients"] = {{"c1", k.c1}, {"c2", k.c2}, {"lambda", k.lambda}, {"c", k.c}, {"lambda_r", k.lambda_r}};
  const std::uint64_t seed = opts.seed.value_or(sc.seed);
  j["seed"] = seed;

  const MacroGrid init = riemann_grid(sc.left, sc.right, k, sc.macro.nx, sc.macro.length, sc.macro.bc);
  std::optional<Profile> exact;
  if (sc.exact) {
    try {
      const WaveFan fan = solve_riemann(sc.left, sc.right, k);
      j["exact"] = {{"middle", state_json(fan.middle)}, {"wave1", wave_json(fan.wave1)}, {"wave2", wave_json(fan.wave2)}};
      if (sc.macro.t_end > 0) {
        exact = profile_from_fan(fan, grid_profile(init).bin_centers, 0.5 * sc.macro.length, sc.macro.t_end);
        write_profile_csv((dir / "exact.csv").string(), *exact);
      }
    } catch (const Error& e) {
      outcome.errors.push_back(std::string("exact: ") + e.what());
    }
  }

  json macro = json::object();
  for (Scheme s : sc.schemes) {
    const std::string name = to_string(s);
    try {
      SchemeConfig cfg;
      cfg.scheme = s;
      cfg.dt = sc.macro.dt;
      cfg.t_end = sc.macro.t_end;
      cfg.exec = opts.exec;
      const RunResult r = run(init, cfg);
      write_grid_csv((dir / ("macro_" + name + ".csv")).string(), r.final_grid);
      json m = {{"courant", r.courant},
                {"mass_initial", init.mass()},
                {"mass_final", r.final_grid.mass()},
                {"shock_position", locate_shock(grid_profile(r.final_grid))},
                {"warnings", r.warnings}};
      if (s == Scheme::Splitting) {
        m["max_norm_defect"] = r.max_norm_defect;
        m["min_discriminant"] = r.min_discriminant;
      }
      if (exact) {
        const double l1 = l1_grid(r.final_grid, *exact);
        double norm = 0.0;
        for (double v : exact->rho) norm += v * init.dx;
        m["l1_rho_exact"] = l1;
        m["l1_rho_exact_relative"] = l1 / norm;
      }
      macro[name] = m;
    } catch (const Error& e) {
      outcome.errors.push_back(name + ": " + e.what());
      macro[name] = {{"error", e.what()}};
    }
  }
  j["macro"] = macro;

  if (sc.micro && !opts.skip_micro) {
    const MicroParams& p = *sc.micro;
    try {
      MicroConfig mc;
      mc.N = opts.paper_scale ? p.full_N : p.N;
      mc.ensemble = opts.paper_scale ? p.full_ensemble : p.ensemble;
      mc.d = sc.d;
      mc.eps = p.eps;
      mc.R = p.R;
      mc.Lx = p.Lx;
      mc.Ly = p.Ly;
      mc.dt = p.dt;
      mc.T = p.t_end;
      mc.left = sc.left;
      mc.right = sc.right;
      mc.bins = p.bins;
      mc.seed = seed;
      mc.exec = opts.exec;
      const MicroResult mr = run_micro(mc);
      const Profile& mp = mr.snapshots.back();
      write_profile_csv((dir / "micro.csv").string(), mp);
      json mj = {{"N", mc.N}, {"ensemble", mc.ensemble}, {"final_order_parameter", mr.order_param.back()}};
      const MacroGrid pinit = riemann_grid(sc.left, sc.right, k, p.macro_nx, p.Lx, Boundary::Periodic, Frame::Physical);
      json cmp = json::object();
      for (Scheme s : sc.schemes) {
        const std::string name = to_string(s);
        try {
          SchemeConfig cfg;
          cfg.scheme = s;
          cfg.dt = p.macro_dt;
          cfg.t_end = p.t_end;
          cfg.exec = opts.exec;
          const RunResult r = run(pinit, cfg);
          const Profile binned = profile_from_grid(r.final_grid, mp.bin_centers, mp.bin_width());
          write_profile_csv((dir / ("micro_vs_" + name + ".csv")).string(), binned);
          const ComparisonReport rep = compare_profiles(mp, binned);
          cmp[name] = {{"l1_rho", rep.l1_rho},
                       {"l1_theta", rep.l1_theta},
                       {"shock_micro", rep.shock_micro},
                       {"shock_macro", rep.shock_macro},
                       {"notes", rep.notes}};
        } catch (const Error& e) {
          outcome.errors.push_back("micro comparison " + name + ": " + e.what());
          cmp[name] = {{"error", e.what()}};
        }
      }
      mj["comparison"] = cmp;
      if (cmp.contains("split") && cmp.contains("cons") && !cmp["split"].contains("error") &&
          !cmp["cons"].contains("error")) {
        const auto& a = cmp["split"];
        const auto& b = cmp["cons"];
        const double sm = a["shock_micro"].get<double>();
        mj["verdicts"] = {
            {"split_closer_rho", a["l1_rho"].get<double>() < b["l1_rho"].get<double>()},
            {"split_closer_theta", a["l1_theta"].get<double>() < b["l1_theta"].get<double>()},
            {"split_closer_shock",
             std::abs(a["shock_macro"].get<double>() - sm) < std::abs(b["shock_macro"].get<double>() - sm)}};
      }
      j["micro"] = mj;
    } catch (const Error& e) {
      outcome.errors.push_back(std::string("micro: ") + e.what());
      j["micro"] = {{"error", e.what()}};
    }
  }
  outcome.ok = outcome.errors.empty();
  j["ok"] = outcome.ok;
  j["errors"] = outcome.errors;
  return j;
}

}  // namespace

std::vector<Scenario> parse_suite(const std::string& text, const std::string& source) {
  const Ctx ctx{source};
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(Errc::parse, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  std::vector<Scenario> out;
  if (!root || root.IsNull()) return out;
  check_keys(ctx, root, {"scenarios"}, "suite");
  const YAML::Node list = root["scenarios"];
  if (!list || list.IsNull()) return out;
  if (!list.IsSequence()) throw Error(Errc::parse, ctx.where(list) + ": scenarios must be a list");
  std::set<std::string> names;
  for (const auto& n : list) {
    Scenario s = parse_scenario(ctx, n);
    if (!names.insert(s.name).second)
      throw Error(Errc::parse, ctx.where(n) + ": duplicate scenario name '" + s.name + "'");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open suite " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_suite(text, path);
}

std::size_t SuiteResult::failed() const {
  return static_cast<std::size_t>(std::count_if(scenarios.begin(), scenarios.end(), [](const auto& s) { return !s.ok; }));
}

SuiteResult run_suite(const std::vector<Scenario>& suite, const std::string& outdir, const SuiteOptions& opts,
                      std::ostream* log) {
  std::vector<const Scenario*> selected;
  for (const auto& want : opts.only)
    if (std::none_of(suite.begin(), suite.end(), [&](const Scenario& s) { return s.name == want; }))
      throw Error(Errc::usage, "no scenario named '" + want + "'");
  for (const auto& s : suite)
    if (opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), s.name) != opts.only.end())
      selected.push_back(&s);

  fs::create_directories(outdir);
  SuiteResult result;
  result.scenarios.resize(selected.size());
  std::vector<json> summaries(selected.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      const Scenario& sc = *selected[i];
      ScenarioOutcome& oc = result.scenarios[i];
      oc.name = sc.name;
      try {
        summaries[i] = run_scenario(sc, fs::path(outdir) / sc.name, opts, oc);
      } catch (const std::exception& e) {
        oc.ok = false;
        oc.errors.push_back(e.what());
        summaries[i] = {{"ok", false}, {"errors", oc.errors}};
      }
      if (log) {
        std::lock_guard lock(log_mutex);
        *log << sc.name << ": " << (oc.ok ? "ok" : "FAILED") << '\n';
        for (const auto& e : oc.errors) *log << "  " << e << '\n';
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(selected.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  json summary;
  summary["paper_scale"] = opts.paper_scale;
  summary["skip_micro"] = opts.skip_micro;
  summary["scenarios"] = json::object();
  for (std::size_t i = 0; i < selected.size(); ++i) summary["scenarios"][selected[i]->name] = summaries[i];
  summary["failed"] = result.failed();
  std::ofstream out(fs::path(outdir) / "summary.json");
  if (!out) throw Error(Errc::usage, "cannot write summary.json in " + outdir);
  out << summary.dump(2) << '\n';
  return result;
}

}  // namespace vh
