#include "vh/exact_riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "vh/error.hpp"
#include "vh/quadrature.hpp"
#include "vh/roots.hpp"

namespace vh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-10;

void check_family(int family) {
  if (family != 1 && family != 2) throw Error(Errc::usage, "wave family must be 1 or 2");
}

void check_rho(const PrimState& u, const char* what) {
  if (!(u.rho > 0.0) || !std::isfinite(u.rho)) {
    std::ostringstream os;
    os << what << " density must be positive, got " << u.rho;
    throw Error(Errc::domain, os.str());
  }
}

// d(log rho)/d(theta) along the integral curve of family p.
double curve_slope(const MVSystem& sys, int family, double s) {
  const auto g = sys.speeds(s);
  if (family == 1) return sys.a * std::sin(s) / (sys.a * std::cos(s) - g[0]);
  return (sys.c * std::cos(s) - g[1]) / (sys.lambda * std::sin(s));
}

// Rejects theta paths that touch the zero set of the integrand denominator:
// theta = pi for family 1, sin theta = 0 for family 2.
void check_path(int family, double from, double to) {
  if (from == to) return;
  const double lo = std::min(from, to), hi = std::max(from, to);
  constexpr double eps = 1e-12;
  bool singular = false;
  if (family == 1) singular = lo <= -kPi + eps || hi >= kPi - eps;
  else singular = (lo <= eps && hi >= -eps) || lo <= -kPi + eps || hi >= kPi - eps;
  if (singular) {
    std::ostringstream os;
    os << "family-" << family << " path [" << lo << ", " << hi << "] crosses a singular angle";
    throw Error(Errc::singularity, os.str());
  }
}

double curve_integral(const MVSystem& sys, int family, double from, double to) {
  check_path(family, from, to);
  if (from == to) return 0.0;
  const auto r = integrate_adaptive(
      [&](double s) {
        const double v = curve_slope(sys, family, s);
        if (!std::isfinite(v)) throw Error(Errc::singularity, "integrand denominator vanished");
        return v;
      },
      from, to, kQuadTol);
  return r.value;
}

double f1(double theta) { return std::log(std::abs(std::tan(0.5 * theta))); }
double f2(double theta) { return std::log(std::abs(std::sin(theta))); }

void check_conservative(const PrimState& u, const char* side) {
  if (std::abs(std::sin(u.theta)) < 1e-12) {
    std::ostringstream os;
    os << "conservative variables undefined on the " << side << " state (sin theta = 0)";
    throw Error(Errc::domain, os.str());
  }
}

bool same_half_plane(double a, double b) { return (std::sin(a) > 0.0) == (std::sin(b) > 0.0); }

// Angles where gamma_p is stationary: the interior extremum pair and the axis.
std::vector<double> stationary_angles(const MVSystem& sys, int family) {
  const auto th = sys.degeneracy_angles();
  std::vector<double> out = {0.0};
  const double t = th[static_cast<std::size_t>(family - 1)];
  if (std::isfinite(t)) {
    out.push_back(t);
    out.push_back(-t);
  }
  return out;
}

bool path_crosses(const std::vector<double>& marks, double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  return std::any_of(marks.begin(), marks.end(), [&](double m) { return m > lo + 1e-12 && m < hi - 1e-12; });
}

struct WaveEnd {
  double rho;
  WaveKind kind;
};

// Forward family-1 wave curve from the left state.
WaveEnd forward_wave1(const MVSystem& sys, const PrimState& l, double theta) {
  if (theta == l.theta) return {l.rho, WaveKind::Rarefaction};
  if (sys.speeds(theta)[0] >= sys.speeds(l.theta)[0])
    return {rarefaction_curve(l, 1, theta, sys).rho, WaveKind::Rarefaction};
  return {hugoniot_density(l, 1, theta, sys), WaveKind::Shock};
}

// Backward family-2 wave curve into the right state.
WaveEnd backward_wave2(const MVSystem& sys, const PrimState& r, double theta) {
  if (theta == r.theta) return {r.rho, WaveKind::Rarefaction};
  if (sys.speeds(theta)[1] <= sys.speeds(r.theta)[1])
    return {rarefaction_curve(r, 2, theta, sys).rho, WaveKind::Rarefaction};
  return {hugoniot_density(r, 2, theta, sys), WaveKind::Shock};
}

std::optional<double> mismatch(const MVSystem& sys, const PrimState& l, const PrimState& r, double theta) {
  try {
    const double r1 = forward_wave1(sys, l, theta).rho;
    const double r2 = backward_wave2(sys, r, theta).rho;
    const double v = std::log(r1) - std::log(r2);
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const Error& e) {
    if (e.code() == Errc::singularity || e.code() == Errc::domain || e.code() == Errc::no_intersection ||
        e.code() == Errc::numerical)
      return std::nullopt;
    throw;
  }
}

Wave make_wave(const MVSystem& sys, int family, const PrimState& a, const PrimState& b, WaveKind kind) {
  Wave w;
  w.family = family;
  w.kind = kind;
  w.strength = std::abs(std::log(b.rho / a.rho)) + std::abs(b.theta - a.theta);
  const auto idx = static_cast<std::size_t>(family - 1);
  const double ga = sys.speeds(a.theta)[idx];
  const double gb = sys.speeds(b.theta)[idx];
  w.degenerate_field = path_crosses(stationary_angles(sys, family), a.theta, b.theta);
  if (kind == WaveKind::Rarefaction) {
    w.speed_tail = ga;
    w.speed_head = gb;
    w.lax_admissible = gb >= ga;
  } else {
    const double s = shock_speed(a, b, sys).s;
    w.speed_tail = w.speed_head = s;
    w.lax_admissible = ga > s && s > gb;
    const auto other = sys.speeds(family == 1 ? b.theta : a.theta);
    if (family == 1) w.lax_admissible = w.lax_admissible && s < other[1];
    else w.lax_admissible = w.lax_admissible && s > other[0];
  }
  return w;
}

// Angle on the theta path [from, to] where gamma_p equals xi.
double invert_speed(const MVSystem& sys, int family, double from, double to, double xi) {
  const auto idx = static_cast<std::size_t>(family - 1);
  auto f = [&](double t) { return sys.speeds(t)[idx] - xi; };
  const double fa = f(from), fb = f(to);
  if (fa == 0.0) return from;
  if (fb == 0.0) return to;
  if ((fa > 0.0) == (fb > 0.0)) return std::abs(fa) < std::abs(fb) ? from : to;
  return bracketed_root(f, from, to, fa, fb, 1e-14);
}

}  // namespace

Mat2 jacobian(const PrimState& u, const ModelCoefficients& k) {
  check_rho(u, "state");
  return MVSystem::rescaled(k).jacobian(u);
}

std::array<CharField, 2> eigen(const PrimState& u, const MVSystem& sys) {
  check_rho(u, "state");
  const auto g = sys.speeds(u.theta);
  const auto r = sys.eigenvectors(u);
  return {CharField{1, g[0], r[0]}, CharField{2, g[1], r[1]}};
}

std::array<CharField, 2> eigen(const PrimState& u, const ModelCoefficients& k) {
  return eigen(u, MVSystem::rescaled(k));
}

double riemann_invariant(const PrimState& u, int family, double theta_ref, const MVSystem& sys) {
  check_family(family);
  check_rho(u, "state");
  return std::log(u.rho) - curve_integral(sys, family, theta_ref, u.theta);
}

double riemann_invariant(const PrimState& u, int family, double theta_ref, const ModelCoefficients& k) {
  return riemann_invariant(u, family, theta_ref, MVSystem::rescaled(k));
}

PrimState rarefaction_curve(const PrimState& anchor, int family, double theta_target, const MVSystem& sys) {
  check_family(family);
  check_rho(anchor, "anchor");
  return {anchor.rho * std::exp(curve_integral(sys, family, anchor.theta, theta_target)), theta_target};
}

PrimState rarefaction_curve(const PrimState& anchor, int family, double theta_target,
                            const ModelCoefficients& k) {
  return rarefaction_curve(anchor, family, theta_target, MVSystem::rescaled(k));
}

double hugoniot_residual(const PrimState& l, const PrimState& r, const MVSystem& sys) {
  check_rho(l, "left");
  check_rho(r, "right");
  check_conservative(l, "left");
  check_conservative(r, "right");
  const double dir_flux = sys.c * (f2(r.theta) - f2(l.theta)) - sys.lambda * (std::log(r.rho) - std::log(l.rho));
  const double mass_flux = sys.a * (r.rho * std::cos(r.theta) - l.rho * std::cos(l.theta));
  return (r.rho - l.rho) * dir_flux - mass_flux * (f1(r.theta) - f1(l.theta));
}

double hugoniot_residual(const PrimState& l, const PrimState& r, const ModelCoefficients& k) {
  return hugoniot_residual(l, r, MVSystem::rescaled(k));
}

ShockSpeed shock_speed(const PrimState& l, const PrimState& r, const MVSystem& sys) {
  check_rho(l, "left");
  check_rho(r, "right");
  check_conservative(l, "left");
  check_conservative(r, "right");
  const double d_rho = r.rho - l.rho;
  const double mass_flux = sys.a * (r.rho * std::cos(r.theta) - l.rho * std::cos(l.theta));
  const double d_f1 = f1(r.theta) - f1(l.theta);
  const double dir_flux = sys.c * (f2(r.theta) - f2(l.theta)) - sys.lambda * (std::log(r.rho) - std::log(l.rho));
  ShockSpeed out;
  out.s_direction = d_f1 != 0.0 ? dir_flux / d_f1 : std::numeric_limits<double>::quiet_NaN();
  const double scale = std::max(l.rho, r.rho);
  if (std::abs(d_rho) <= 1e-14 * scale) {
    if (std::abs(mass_flux) > 1e-12 * scale || !std::isfinite(out.s_direction)) {
      std::ostringstream os;
      os << "equal densities with mass-flux jump " << mass_flux << " and f1 jump " << d_f1;
      throw Error(Errc::not_a_shock, os.str());
    }
    out.s = out.s_direction;
    return out;
  }
  out.s = mass_flux / d_rho;
  if (std::isfinite(out.s_direction))
    out.relative_mismatch = std::abs(out.s - out.s_direction) / std::max(1.0, std::abs(out.s));
  return out;
}

ShockSpeed shock_speed(const PrimState& l, const PrimState& r, const ModelCoefficients& k) {
  return shock_speed(l, r, MVSystem::rescaled(k));
}

double hugoniot_density(const PrimState& anchor, int family, double theta, const MVSystem& sys) {
  check_family(family);
  check_rho(anchor, "anchor");
  if (theta == anchor.theta) return anchor.rho;
  check_conservative(anchor, "anchor");
  if (std::abs(std::sin(theta)) < 1e-12 || !same_half_plane(anchor.theta, theta)) {
    std::ostringstream os;
    os << "shock curve from theta=" << anchor.theta << " to " << theta << " crosses sin(theta)=0";
    throw Error(Errc::singularity, os.str());
  }
  // The two branches sit on opposite sides of rho_anchor; the family-p
  // branch leaves along r_p, whose rho component has the sign of
  // sin(theta) (p = 1) or -sin(theta) (p = 2).
  double side = (std::sin(anchor.theta) > 0.0) == (theta > anchor.theta) ? 1.0 : -1.0;
  if (family == 2) side = -side;
  auto h = [&](double log_rho) { return hugoniot_residual(anchor, PrimState{std::exp(log_rho), theta}, sys); };
  const double l0 = std::log(anchor.rho);
  double a = l0, fa = h(a);
  double step = 0.02 * side;
  double b = a + step, fb = h(b);
  while ((fa > 0.0) == (fb > 0.0)) {
    a = b;
    fa = fb;
    step *= 1.6;
    b = a + step;
    if (std::abs(b - l0) > 60.0) throw Error(Errc::no_intersection, "Hugoniot branch has no root within e^60");
    fb = h(b);
  }
  return std::exp(bracketed_root(h, a, b, fa, fb, 1e-15));
}

double hugoniot_density(const PrimState& anchor, int family, double theta, const ModelCoefficients& k) {
  return hugoniot_density(anchor, family, theta, MVSystem::rescaled(k));
}

WaveFan solve_riemann(const PrimState& left_in, const PrimState& right_in, const MVSystem& sys) {
  check_rho(left_in, "left");
  check_rho(right_in, "right");
  const PrimState l{left_in.rho, wrap_angle(left_in.theta)};
  const PrimState r{right_in.rho, wrap_angle(right_in.theta)};

  WaveFan fan;
  fan.left = l;
  fan.right = r;
  fan.system = sys;
  if (std::abs(l.rho - r.rho) <= 1e-14 * l.rho && l.theta == r.theta) {
    fan.middle = l;
    fan.wave1 = make_wave(sys, 1, l, l, WaveKind::Rarefaction);
    fan.wave2 = make_wave(sys, 2, l, l, WaveKind::Rarefaction);
    return fan;
  }

  // Scan theta_m over (-pi, pi); points where a wave curve is undefined are skipped.
  std::vector<double> grid;
  constexpr int n_scan = 720;
  for (int i = 1; i < n_scan; ++i) grid.push_back(-kPi + 2.0 * kPi * i / n_scan);
  grid.push_back(l.theta);
  grid.push_back(r.theta);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<std::optional<double>> values;
  values.reserve(grid.size());
  for (double t : grid) values.push_back(mismatch(sys, l, r, t));

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!values[i] || !values[i + 1]) continue;
    const double fa = *values[i], fb = *values[i + 1];
    if (fa == 0.0) {
      roots.push_back(grid[i]);
      continue;
    }
    if ((fa > 0.0) == (fb > 0.0)) continue;
    // A sign flip across a kind switch can also be a jump; keep only
    // brackets whose refined root really zeroes the mismatch.
    auto f = [&](double t) {
      const auto v = mismatch(sys, l, r, t);
      if (!v) throw Error(Errc::numerical, "wave curve undefined inside bracket");
      return *v;
    };
    try {
      const double t = bracketed_root(f, grid[i], grid[i + 1], fa, fb, 1e-14);
      if (std::abs(f(t)) < 1e-8) roots.push_back(t);
    } catch (const Error&) {
    }
  }
  if (values.back() && *values.back() == 0.0) roots.push_back(grid.back());

  std::optional<WaveFan> best;
  for (double t : roots) {
    WaveFan cand = fan;
    const auto w1 = forward_wave1(sys, l, t);
    const auto w2 = backward_wave2(sys, r, t);
    cand.middle = {std::sqrt(w1.rho * w2.rho), t};
    cand.wave1 = make_wave(sys, 1, l, cand.middle, w1.kind);
    cand.wave2 = make_wave(sys, 2, cand.middle, r, w2.kind);
    if (cand.wave1.speed_head <= cand.wave2.speed_tail + 1e-12) {
      best = cand;
      break;
    }
    if (!best) best = cand;
  }
  if (!best) {
    std::size_t valid = 0;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (const auto& v : values)
      if (v) {
        ++valid;
        vmin = std::min(vmin, *v);
        vmax = std::max(vmax, *v);
      }
    std::ostringstream os;
    os << "left=(" << l.rho << "," << l.theta << ") right=(" << r.rho << "," << r.theta << "): " << valid << "/"
       << grid.size() << " scan angles admissible, log-density mismatch range [" << vmin << ", " << vmax << "]";
    throw Error(Errc::no_intersection, os.str());
  }
  // Recompute the middle density from the 1-curve exactly (mismatch ~1e-8 or below).
  best->middle.rho = forward_wave1(sys, l, best->middle.theta).rho;
  return *best;
}

WaveFan solve_riemann(const PrimState& left, const PrimState& right, const ModelCoefficients& k) {
  return solve_riemann(left, right, MVSystem::rescaled(k));
}

PrimState sample(const WaveFan& fan, double xi) {
  const MVSystem& sys = fan.system;
  const Wave& w1 = fan.wave1;
  const Wave& w2 = fan.wave2;
  if (xi < w1.speed_tail) return fan.left;
  if (xi < w1.speed_head) {
    const double t = invert_speed(sys, 1, fan.left.theta, fan.middle.theta, xi);
    return rarefaction_curve(fan.left, 1, t, sys);
  }
  if (w1.kind == WaveKind::Shock && xi < w1.speed_head) return fan.left;
  if (xi < w2.speed_tail) return fan.middle;
  if (xi < w2.speed_head) {
    const double t = invert_speed(sys, 2, fan.middle.theta, fan.right.theta, xi);
    return rarefaction_curve(fan.right, 2, t, sys);
  }
  return fan.right;
}

std::string describe(const WaveFan& fan) {
  std::ostringstream os;
  auto wave = [&](const Wave& w) {
    os << "wave" << w.family << ": " << (w.kind == WaveKind::Shock ? "shock" : "rarefaction");
    if (w.kind == WaveKind::Shock) os << " speed=" << w.speed_tail;
    else os << " speeds=[" << w.speed_tail << ", " << w.speed_head << "]";
    os << " strength=" << w.strength;
    if (w.degenerate_field) os << " (degenerate-field wave)";
    if (!w.lax_admissible) os << " (Lax condition violated)";
    os << "\n";
  };
  os.precision(10);
  os << "left=(" << fan.left.rho << ", " << fan.left.theta << ")\n";
  wave(fan.wave1);
  os << "middle=(" << fan.middle.rho << ", " << fan.middle.theta << ")\n";
  wave(fan.wave2);
  os << "right=(" << fan.right.rho << ", " << fan.right.theta << ")\n";
  return os.str();
}

}  // namespace vh
