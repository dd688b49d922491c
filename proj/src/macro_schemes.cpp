#include "vh/macro_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vh/error.hpp"

namespace vh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double harten(double v, double delta) {
  const double av = std::abs(v);
  if (av >= delta || delta <= 0.0) return av;
  return 0.5 * (v * v + delta * delta) / delta;
}

// Cells plus one ghost on each side.
std::vector<PrimState> with_ghosts(const MacroGrid& g) {
  const std::size_t n = g.nx();
  std::vector<PrimState> ext(n + 2);
  std::copy(g.cells.begin(), g.cells.end(), ext.begin() + 1);
  if (g.bc == Boundary::Periodic) {
    ext[0] = g.cells[n - 1];
    ext[n + 1] = g.cells[0];
  } else {
    ext[0] = g.cells[0];
    ext[n + 1] = g.cells[n - 1];
  }
  return ext;
}

void finish(MacroGrid& out, StepStats* stats) {
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < out.nx(); ++i) {
    const double r = out.cells[i].rho;
    if (!(r >= kRhoFloor)) {
      std::ostringstream os;
      os << "density " << r << " in cell " << i << " (x=" << out.center(i) << ")";
      throw Error(Errc::positivity_lost, os.str());
    }
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (stats) {
    stats->min_rho = lo;
    stats->max_rho = hi;
  }
}

// Interface state between a and b: mean density and the midpoint of the
// shorter arc between the angles.
PrimState interface_state(const PrimState& a, const PrimState& b) {
  return {0.5 * (a.rho + b.rho), wrap_angle(a.theta + 0.5 * wrap_angle(b.theta - a.theta))};
}

Vec2 jump(const PrimState& a, const PrimState& b) { return {b.rho - a.rho, wrap_angle(b.theta - a.theta)}; }

// Upwind increments of the non-conservative form, per interface j between
// ext[j] and ext[j+1]: A+ dU (feeds cell j+1) and A- dU (feeds cell j).
struct UpwindFluctuations {
  std::vector<Vec2> plus, minus;
  std::vector<Mat2> abs_a;  // |A| at each interface
  std::vector<PrimState> mean;
};

UpwindFluctuations upwind_fluctuations(const MVSystem& sys, const std::vector<PrimState>& ext, Exec exec) {
  const std::size_t ni = ext.size() - 1;
  UpwindFluctuations f;
  f.plus.resize(ni);
  f.minus.resize(ni);
  f.abs_a.resize(ni);
  f.mean.resize(ni);
  const auto n = static_cast<long>(ni);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const PrimState m = interface_state(ext[k], ext[k + 1]);
    const Vec2 du = jump(ext[k], ext[k + 1]);
    const SplitJacobian s = split_jacobian(sys, m);
    f.plus[k] = s.plus * du;
    f.minus[k] = s.minus * du;
    f.abs_a[k] = s.plus + s.minus;
    f.mean[k] = m;
  }
  return f;
}

// theta component of one upwind step for cell i (interior index).
double upwind_theta(const PrimState& u, const UpwindFluctuations& f, std::size_t i, double r) {
  return wrap_angle(u.theta - r * (f.plus[i][1] - f.minus[i + 1][1]));
}

double f1(double theta) { return std::log(std::abs(std::tan(0.5 * theta))); }
double f2(double theta) { return std::log(std::abs(std::sin(theta))); }

}  // namespace

Scheme parse_scheme(const std::string& name) {
  if (name == "cons" || name == "conservative") return Scheme::Conservative;
  if (name == "split" || name == "splitting") return Scheme::Splitting;
  if (name == "upwind") return Scheme::Upwind;
  if (name == "semi" || name == "semiconservative") return Scheme::SemiConservative;
  throw Error(Errc::usage, "unknown scheme '" + name + "' (cons|split|upwind|semi)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Conservative: return "cons";
    case Scheme::Splitting: return "split";
    case Scheme::Upwind: return "upwind";
    case Scheme::SemiConservative: return "semi";
  }
  return "?";
}

Boundary parse_boundary(const std::string& name) {
  if (name == "neumann") return Boundary::Neumann;
  if (name == "periodic") return Boundary::Periodic;
  throw Error(Errc::usage, "unknown boundary condition '" + name + "' (neumann|periodic)");
}

std::string to_string(Boundary b) { return b == Boundary::Neumann ? "neumann" : "periodic"; }

Frame parse_frame(const std::string& name) {
  if (name == "rescaled") return Frame::Rescaled;
  if (name == "physical") return Frame::Physical;
  throw Error(Errc::usage, "unknown frame '" + name + "' (rescaled|physical)");
}

std::string to_string(Frame f) { return f == Frame::Rescaled ? "rescaled" : "physical"; }

double MacroGrid::mass() const {
  double s = 0.0;
  for (const auto& c : cells) s += c.rho;
  return s * dx;
}

void MacroGrid::validate() const {
  if (cells.size() < 4) throw Error(Errc::usage, "macro grid needs at least 4 cells");
  if (!(dx > 0.0)) throw Error(Errc::usage, "cell width must be positive");
  if (!side.empty() && side.size() != cells.size()) throw Error(Errc::usage, "orientation field size mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!(cells[i].rho > 0.0)) {
      std::ostringstream os;
      os << "non-positive density " << cells[i].rho << " in cell " << i;
      throw Error(Errc::domain, os.str());
    }
  }
}

MacroGrid riemann_grid(const PrimState& left, const PrimState& right, const ModelCoefficients& k, std::size_t nx,
                       double length, Boundary bc, Frame frame) {
  MacroGrid g;
  g.dx = length / static_cast<double>(nx);
  g.bc = bc;
  g.coeffs = k;
  g.frame = frame;
  g.cells.resize(nx);
  const PrimState l{left.rho, wrap_angle(left.theta)}, r{right.rho, wrap_angle(right.theta)};
  for (std::size_t i = 0; i < nx; ++i) g.cells[i] = 2 * i < nx ? l : r;
  g.validate();
  return g;
}

SplitJacobian split_jacobian(const MVSystem& sys, const PrimState& u) {
  const auto g = sys.speeds(u.theta);
  const auto r = sys.eigenvectors(u);
  Mat2 rm;
  rm(0, 0) = r[0][0];
  rm(1, 0) = r[0][1];
  rm(0, 1) = r[1][0];
  rm(1, 1) = r[1][1];
  const Mat2 ri = inverse(rm);
  auto build = [&](double l1, double l2) {
    Mat2 d;
    d(0, 0) = l1;
    d(1, 1) = l2;
    return rm * d * ri;
  };
  return {build(std::max(g[0], 0.0), std::max(g[1], 0.0)), build(std::max(-g[0], 0.0), std::max(-g[1], 0.0))};
}

double courant_number(const MacroGrid& g, double dt) { return dt / g.dx * g.system().max_speed_bound(); }

MacroGrid step_upwind(const MacroGrid& g, double dt, Exec exec, StepStats* stats) {
  const MVSystem sys = g.system();
  const auto ext = with_ghosts(g);
  const auto f = upwind_fluctuations(sys, ext, exec);
  const double r = dt / g.dx;
  MacroGrid out = g;
  out.side.clear();
  const auto n = static_cast<long>(g.nx());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    const PrimState& u = g.cells[i];
    out.cells[i].rho = u.rho - r * (f.plus[i][0] - f.minus[i + 1][0]);
    out.cells[i].theta = upwind_theta(u, f, i, r);
  }
  finish(out, stats);
  return out;
}

MacroGrid step_semiconservative(const MacroGrid& g, double dt, Exec exec, StepStats* stats) {
  const MVSystem sys = g.system();
  const auto ext = with_ghosts(g);
  const auto f = upwind_fluctuations(sys, ext, exec);
  const double r = dt / g.dx;
  const std::size_t ni = ext.size() - 1;
  std::vector<double> flux(ni);
  const auto nf = static_cast<long>(ni);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < nf; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const PrimState& m = f.mean[k];
    const Vec2 du = jump(ext[k], ext[k + 1]);
    flux[k] = sys.a * m.rho * std::cos(m.theta) - 0.5 * (f.abs_a[k](0, 0) * du[0] + f.abs_a[k](0, 1) * du[1]);
  }
  MacroGrid out = g;
  out.side.clear();
  const auto n = static_cast<long>(g.nx());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    out.cells[i].rho = g.cells[i].rho - r * (flux[i + 1] - flux[i]);
    out.cells[i].theta = upwind_theta(g.cells[i], f, i, r);
  }
  finish(out, stats);
  return out;
}

MacroGrid step_conservative(const MacroGrid& g, double dt, double entropy_fix, Exec exec, StepStats* stats) {
  const MVSystem sys = g.system();
  const auto ext = with_ghosts(g);
  const std::size_t ne = ext.size();
  std::vector<Vec2> v(ne), fv(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    const PrimState& u = ext[k];
    v[k] = {u.rho, f1(u.theta)};
    if (!std::isfinite(v[k][1])) {
      std::ostringstream os;
      os << "f1 undefined at theta=" << u.theta << " (cell " << (k == 0 ? 0 : std::min(k - 1, g.nx() - 1)) << ")";
      throw Error(Errc::numerical, os.str());
    }
    fv[k] = {sys.a * u.rho * std::cos(u.theta), sys.c * f2(u.theta) - sys.lambda * std::log(u.rho)};
  }
  std::vector<double> side(ne);
  for (std::size_t i = 0; i < g.nx(); ++i) side[i + 1] = g.side.empty() ? (g.cells[i].theta < 0.0 ? -1.0 : 1.0) : g.side[i];
  side[0] = g.bc == Boundary::Periodic ? side[ne - 2] : side[1];
  side[ne - 1] = g.bc == Boundary::Periodic ? side[1] : side[ne - 2];
  const std::size_t ni = ne - 1;
  std::vector<Vec2> flux(ni);
  const auto nf = static_cast<long>(ni);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < nf; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const PrimState mean{0.5 * (v[k][0] + v[k + 1][0]), 2.0 * std::atan(std::exp(0.5 * (v[k][1] + v[k + 1][1])))};
    const Mat2 am = sys.conservative_jacobian(mean);
    const auto ev = sys.speeds(mean.theta);
    const double delta = entropy_fix * std::max(std::abs(ev[0]), std::abs(ev[1]));
    const Mat2 abs_am = spectral_apply(am, ev, [&](double x) { return harten(x, delta); });
    const Vec2 dv{v[k + 1][0] - v[k][0], v[k + 1][1] - v[k][1]};
    const Vec2 diss = abs_am * dv;
    flux[k] = {0.5 * (fv[k][0] + fv[k + 1][0] - diss[0]), 0.5 * (fv[k][1] + fv[k + 1][1] - diss[1])};
  }
  const double r = dt / g.dx;
  MacroGrid out = g;
  out.side.resize(g.nx());
  const auto n = static_cast<long>(g.nx());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    const std::size_t k = i + 1;
    const double rho = v[k][0] - r * (flux[i + 1][0] - flux[i][0]);
    const double w = v[k][1] - r * (flux[i + 1][1] - flux[i][1]);
    const double mag = 2.0 * std::atan(std::exp(w));
    const double ul = sys.c * 0.5 * (std::cos(ext[k - 1].theta) + std::cos(ext[k].theta));
    const double ur = sys.c * 0.5 * (std::cos(ext[k].theta) + std::cos(ext[k + 1].theta));
    const double s =
        side[k] - r * (std::max(ul, 0.0) * (side[k] - side[k - 1]) + std::min(ur, 0.0) * (side[k + 1] - side[k]));
    out.side[i] = s;
    const bool negative = s < 0.0 || (s == 0.0 && g.cells[i].theta < 0.0);
    out.cells[i] = {rho, negative ? -mag : mag};
  }
  for (std::size_t i = 0; i < out.nx(); ++i) {
    if (!std::isfinite(out.cells[i].theta)) {
      std::ostringstream os;
      os << "f1 inversion failed in cell " << i;
      throw Error(Errc::numerical, os.str());
    }
  }
  finish(out, stats);
  return out;
}

MacroGrid step_splitting(const MacroGrid& g, double dt, double entropy_fix, Exec exec, StepStats* stats) {
  const MVSystem sys = g.system();
  const auto ext = with_ghosts(g);
  const std::size_t ne = ext.size();
  std::vector<Vec3> q(ne), fq(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    const PrimState& u = ext[k];
    const double m1 = u.rho * std::cos(u.theta), m2 = u.rho * std::sin(u.theta);
    q[k] = {u.rho, m1, m2};
    fq[k] = {sys.a * m1, sys.c * m1 * m1 / u.rho + sys.lambda * u.rho, sys.c * m1 * m2 / u.rho};
  }
  const std::size_t ni = ne - 1;
  std::vector<Vec3> flux(ni);
  std::vector<double> disc(ni);
  const auto nf = static_cast<long>(ni);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (long j = 0; j < nf; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double rho = 0.5 * (q[k][0] + q[k + 1][0]);
    const double u = 0.5 * (q[k][1] + q[k + 1][1]) / rho;
    const double w = 0.5 * (q[k][2] + q[k + 1][2]) / rho;
    const double dsc = sys.relaxation_discriminant(u);
    disc[k] = dsc;
    if (!(dsc > 0.0)) continue;
    Mat3 jac;
    jac(0, 1) = sys.a;
    jac(1, 0) = sys.lambda - sys.c * u * u;
    jac(1, 1) = 2.0 * sys.c * u;
    jac(2, 0) = -sys.c * u * w;
    jac(2, 1) = sys.c * w;
    jac(2, 2) = sys.c * u;
    const double sq = std::sqrt(dsc);
    const Vec3 ev{sys.c * u - sq, sys.c * u, sys.c * u + sq};
    const double delta = entropy_fix * std::max(std::abs(ev[0]), std::abs(ev[2]));
    const Mat3 abs_j = spectral_apply(jac, ev, [&](double x) { return harten(x, delta); });
    const Vec3 dq{q[k + 1][0] - q[k][0], q[k + 1][1] - q[k][1], q[k + 1][2] - q[k][2]};
    const Vec3 diss = abs_j * dq;
    for (std::size_t c = 0; c < 3; ++c) flux[k][c] = 0.5 * (fq[k][c] + fq[k + 1][c] - diss[c]);
  }
  double min_disc = kInf;
  for (std::size_t k = 0; k < ni; ++k) {
    if (!(disc[k] > 0.0)) {
      std::ostringstream os;
      os << "relaxation system not hyperbolic at interface " << k << " (discriminant " << disc[k] << ")";
      throw Error(Errc::numerical, os.str());
    }
    min_disc = std::min(min_disc, disc[k]);
  }

  const double r = dt / g.dx;
  MacroGrid out = g;
  out.side.clear();
  double defect = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double rho = q[i + 1][0] - r * (flux[i + 1][0] - flux[i][0]);
    const double m1 = q[i + 1][1] - r * (flux[i + 1][1] - flux[i][1]);
    const double m2 = q[i + 1][2] - r * (flux[i + 1][2] - flux[i][2]);
    const double norm = std::hypot(m1, m2);
    if (!(norm > 0.0)) {
      std::ostringstream os;
      os << "momentum vanished in cell " << i << "; direction undefined";
      throw Error(Errc::numerical, os.str());
    }
    // Relaxation substep in the eps -> 0 limit: m <- rho m / |m|.
    const double n1 = rho * m1 / norm, n2 = rho * m2 / norm;
    defect = std::max(defect, std::abs(std::hypot(n1, n2) / rho - 1.0));
    out.cells[i] = {rho, std::atan2(n2, n1)};
  }
  finish(out, stats);
  if (stats) {
    stats->norm_defect = defect;
    stats->min_discriminant = min_disc;
  }
  return out;
}

MacroGrid step(const MacroGrid& g, const SchemeConfig& cfg, double dt, StepStats* stats) {
  switch (cfg.scheme) {
    case Scheme::Conservative: return step_conservative(g, dt, cfg.entropy_fix, cfg.exec, stats);
    case Scheme::Splitting: return step_splitting(g, dt, cfg.entropy_fix, cfg.exec, stats);
    case Scheme::Upwind: return step_upwind(g, dt, cfg.exec, stats);
    case Scheme::SemiConservative: return step_semiconservative(g, dt, cfg.exec, stats);
  }
  throw Error(Errc::usage, "unknown scheme");
}

RunResult run(const MacroGrid& initial, const SchemeConfig& cfg) {
  initial.validate();
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= 0.0)) throw Error(Errc::usage, "dt must be positive and T non-negative");
  RunResult res;
  res.courant = courant_number(initial, cfg.dt);
  if (res.courant > 2.0) {
    std::ostringstream os;
    os << "Courant number " << res.courant << " exceeds 2";
    throw Error(Errc::usage, os.str());
  }
  if (res.courant > 1.0) {
    std::ostringstream os;
    os << "Courant number " << res.courant << " above 1; scheme may be unstable";
    res.warnings.push_back(os.str());
  }
  res.min_discriminant = kInf;

  MacroGrid cur = initial;
  double t = 0.0;
  std::size_t n = 0;
  auto row = [&](double lo, double hi) { res.diagnostics.push_back({n, t, cur.mass(), res.courant, lo, hi}); };
  {
    double lo = kInf, hi = -kInf;
    for (const auto& c : cur.cells) {
      lo = std::min(lo, c.rho);
      hi = std::max(hi, c.rho);
    }
    row(lo, hi);
  }
  res.snapshots.push_back({0.0, cur});
  double next_snap = cfg.snapshot_every > 0.0 ? cfg.snapshot_every : kInf;
  const double eps_t = 1e-9 * cfg.dt;
  while (t < cfg.t_end - eps_t) {
    const double dt = std::min(cfg.dt, cfg.t_end - t);
    StepStats st;
    cur = step(cur, cfg, dt, &st);
    ++n;
    t = std::abs(t + dt - cfg.t_end) <= eps_t ? cfg.t_end : t + dt;
    row(st.min_rho, st.max_rho);
    if (cfg.scheme == Scheme::Splitting) {
      res.max_norm_defect = std::max(res.max_norm_defect, st.norm_defect);
      res.min_discriminant = std::min(res.min_discriminant, st.min_discriminant);
    }
    if (t >= next_snap - eps_t && t < cfg.t_end - eps_t) {
      res.snapshots.push_back({t, cur});
      next_snap += cfg.snapshot_every;
    }
  }
  if (res.snapshots.back().t != t) res.snapshots.push_back({t, cur});
  res.final_grid = cur;
  return res;
}

}  // namespace vh
