#include "vh/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "vh/error.hpp"
#include "vh/von_mises.hpp"

namespace vh {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_window(double x, const Window& w) { return !w || (x >= w->first && x <= w->second); }

void check_same_bins(const Profile& a, const Profile& b) {
  if (a.size() != b.size() || a.size() < 2) throw Error(Errc::usage, "profiles have different or too few bins");
  const double tol = 1e-9 * std::max(1.0, std::abs(a.bin_width()));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.bin_centers[i] - b.bin_centers[i]) > tol)
      throw Error(Errc::usage, "bin centers differ at bin " + std::to_string(i));
}

}  // namespace

double locate_shock(const Profile& p, const Window& window) {
  const std::size_t n = p.size();
  if (n < 2) throw Error(Errc::usage, "locate_shock needs at least two bins");
  std::vector<double> jump(n - 1, 0.0);
  std::size_t best = n;
  double best_val = 0.0;
  for (std::size_t b = 0; b + 1 < n; ++b) {
    jump[b] = std::abs(p.rho[b + 1] - p.rho[b]);
    const double xm = 0.5 * (p.bin_centers[b] + p.bin_centers[b + 1]);
    if (!std::isfinite(jump[b]) || !in_window(xm, window)) continue;
    if (jump[b] > best_val) {
      best_val = jump[b];
      best = b;
    }
  }
  if (best == n) return std::nan("");
  const double xm = 0.5 * (p.bin_centers[best] + p.bin_centers[best + 1]);
  if (best == 0 || best + 2 >= n) return xm;
  const double fm = jump[best - 1], f0 = jump[best], fp = jump[best + 1];
  const double denom = fm - 2.0 * f0 + fp;
  if (!std::isfinite(denom) || denom >= 0.0) return xm;
  const double shift = std::clamp(0.5 * (fm - fp) / denom, -0.5, 0.5);
  return xm + shift * p.bin_width();
}

ComparisonReport compare_profiles(const Profile& micro, const Profile& macro, const Window& window) {
  check_same_bins(micro, macro);
  ComparisonReport r;
  const double w = micro.bin_width();
  std::size_t skipped = 0, rho_skipped = 0;
  for (std::size_t i = 0; i < micro.size(); ++i) {
    if (!in_window(micro.bin_centers[i], window)) continue;
    const double dr = std::abs(micro.rho[i] - macro.rho[i]);
    if (std::isfinite(dr))
      r.l1_rho += dr * w;
    else
      ++rho_skipped;
    const double a = micro.theta_mean[i], b = macro.theta_mean[i];
    if (std::isfinite(a) && std::isfinite(b))
      r.l1_theta += circular_distance(a, b) * w;
    else
      ++skipped;
  }
  if (skipped) r.notes.push_back(std::to_string(skipped) + " bins with undefined theta skipped");
  if (rho_skipped) r.notes.push_back(std::to_string(rho_skipped) + " bins with undefined rho skipped");
  r.shock_micro = locate_shock(micro, window);
  r.shock_macro = locate_shock(macro, window);
  return r;
}

Profile profile_from_grid(const MacroGrid& g, const std::vector<double>& bin_centers, double bin_width) {
  if (g.nx() == 0 || !(bin_width > 0.0)) throw Error(Errc::usage, "empty grid or non-positive bin width");
  const auto n = static_cast<long>(g.nx());
  Profile p;
  p.bin_centers = bin_centers;
  p.rho.resize(bin_centers.size());
  p.theta_mean.resize(bin_centers.size());
  p.circ_var.assign(bin_centers.size(), 0.0);
  for (std::size_t b = 0; b < bin_centers.size(); ++b) {
    const double lo = (bin_centers[b] - 0.5 * bin_width - g.x0) / g.dx;
    const double hi = (bin_centers[b] + 0.5 * bin_width - g.x0) / g.dx;
    double mass = 0.0, fx = 0.0, fy = 0.0;
    for (auto i = static_cast<long>(std::floor(lo)); static_cast<double>(i) < hi; ++i) {
      const double overlap = std::min(hi, static_cast<double>(i + 1)) - std::max(lo, static_cast<double>(i));
      if (overlap <= 0.0) continue;
      long j = i;
      if (g.bc == Boundary::Periodic)
        j = ((i % n) + n) % n;
      else
        j = std::clamp(i, 0L, n - 1);
      const PrimState& u = g.cells[static_cast<std::size_t>(j)];
      mass += overlap * u.rho;
      fx += overlap * u.rho * std::cos(u.theta);
      fy += overlap * u.rho * std::sin(u.theta);
    }
    p.rho[b] = mass * g.dx / bin_width;
    p.theta_mean[b] = (fx == 0.0 && fy == 0.0) ? std::nan("") : std::atan2(fy, fx);
  }
  return p;
}

Profile profile_from_fan(const WaveFan& fan, const std::vector<double>& bin_centers, double x_jump, double t) {
  if (!(t > 0.0)) throw Error(Errc::domain, "fan profile needs t > 0");
  Profile p;
  p.bin_centers = bin_centers;
  p.rho.resize(bin_centers.size());
  p.theta_mean.resize(bin_centers.size());
  p.circ_var.assign(bin_centers.size(), 0.0);
  for (std::size_t b = 0; b < bin_centers.size(); ++b) {
    const PrimState u = sample(fan, (bin_centers[b] - x_jump) / t);
    p.rho[b] = u.rho;
    p.theta_mean[b] = u.theta;
  }
  return p;
}

VortexResidual vortex_residual(double C, const ModelCoefficients& k, double r_min, double r_max, int n_r,
                               int n_angular, double exponent_scale) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw Error(Errc::domain, "vortex residual needs 0 < r_min < r_max");
  if (!(C > 0.0)) throw Error(Errc::domain, "vortex amplitude must be positive");
  if (n_r < 2 || n_angular < 4) throw Error(Errc::usage, "vortex grid too coarse");
  const double c = k.c, lam = k.lambda_r;
  const double alpha = exponent_scale * c / lam;
  const double hr = (r_max - r_min) / n_r;
  const double hp = 2.0 * kPi / n_angular;

  // Cartesian fields on the polar grid; derivatives of a nodal field by
  // centred differences, then the chain rule to x and y.
  auto rho = [&](double r) { return C * std::pow(r, alpha); };
  VortexResidual out;
  for (int i = 1; i < n_r; ++i) {
    const double r = r_min + i * hr;
    const double rm = r - hr, rp = r + hr;
    for (int j = 0; j < n_angular; ++j) {
      const double ph = j * hp, phm = (j - 1) * hp, php = (j + 1) * hp;
      const double cs = std::cos(ph), sn = std::sin(ph);
      auto dx = [&](double f_r, double f_p) { return cs * f_r - sn / r * f_p; };
      auto dy = [&](double f_r, double f_p) { return sn * f_r + cs / r * f_p; };

      // Omega = (-sin ph, cos ph), independent of r.
      const double ox = -sn, oy = cs;
      const double ox_p = (-std::sin(php) + std::sin(phm)) / (2.0 * hp);
      const double oy_p = (std::cos(php) - std::cos(phm)) / (2.0 * hp);
      const double r0 = rho(r);
      const double rho_r = (rho(rp) - rho(rm)) / (2.0 * hr);
      const double rho_p = 0.0;  // rho is independent of the angle

      // rho * Omega components.
      const double mx_r = (rho(rp) - rho(rm)) / (2.0 * hr) * ox;
      const double mx_p = r0 * ox_p;
      const double my_r = (rho(rp) - rho(rm)) / (2.0 * hr) * oy;
      const double my_p = r0 * oy_p;
      const double div = dx(mx_r, mx_p) + dy(my_r, my_p);

      const double rx = dx(rho_r, rho_p), ry = dy(rho_r, rho_p);
      const double oxx = dx(0.0, ox_p), oxy = dy(0.0, ox_p);
      const double oyx = dx(0.0, oy_p), oyy = dy(0.0, oy_p);
      const double advx = ox * oxx + oy * oxy;
      const double advy = ox * oyx + oy * oyy;
      const double proj = ox * rx + oy * ry;
      const double gx = rx - ox * proj, gy = ry - oy * proj;
      const double mom_x = c * advx + lam * gx / r0;
      const double mom_y = c * advy + lam * gy / r0;

      out.divergence = std::max(out.divergence, std::abs(div));
      out.momentum = std::max(out.momentum, std::hypot(mom_x, mom_y));
    }
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

EquilibriumReport equilibrium_checks(const std::vector<std::vector<double>>& heading_snapshots, double d,
                                     double alpha, double phi_tol) {
  if (!(d > 0.0)) throw Error(Errc::domain, "equilibrium checks need d > 0");
  constexpr int kBins = 36;
  EquilibriumReport rep;
  const VonMises vm(d);
  rep.phi_target = c1_closed_form(d);
  rep.phi_von_mises = vm.mean_resultant();

  const std::size_t first = heading_snapshots.size() / 3;
  rep.snapshots_used = heading_snapshots.size() - first;
  if (rep.snapshots_used < 3) {
    rep.notes = "fewer than 3 snapshots after burn-in";
    return rep;
  }
  const std::size_t N = heading_snapshots[first].size();
  if (N == 0) {
    rep.notes = "empty snapshots";
    return rep;
  }

  std::vector<double> hist(kBins, 0.0);
  double phi_sum = 0.0;
  for (std::size_t s = first; s < heading_snapshots.size(); ++s) {
    const auto& h = heading_snapshots[s];
    if (h.size() != N) throw Error(Errc::usage, "snapshots have different particle counts");
    double sx = 0.0, sy = 0.0;
    for (double a : h) {
      sx += std::cos(a);
      sy += std::sin(a);
    }
    phi_sum += std::hypot(sx, sy) / static_cast<double>(N);
    const double mean = std::atan2(sy, sx);
    for (double a : h) {
      const double dev = wrap_angle(a - mean);
      auto b = static_cast<int>(std::floor((dev + kPi) / (2.0 * kPi) * kBins));
      hist[static_cast<std::size_t>(std::clamp(b, 0, kBins - 1))] += 1.0;
    }
  }
  const double m = static_cast<double>(rep.snapshots_used);
  rep.phi_mean = phi_sum / m;
  for (double& v : hist) v /= m;

  std::vector<double> expected(kBins);
  double prev = 0.0;
  for (int b = 0; b < kBins; ++b) {
    const double edge = -kPi + 2.0 * kPi * (b + 1) / kBins;
    const double cdf = (b + 1 == kBins) ? 1.0 : vm.cdf(edge);
    expected[static_cast<std::size_t>(b)] = static_cast<double>(N) * (cdf - prev);
    prev = cdf;
  }
  rep.observed = hist;
  rep.expected = expected;

  // Merge sparse tail bins (the law is symmetric about 0, so both tails are
  // sparse) into their neighbour until each group expects >= 5 counts.
  std::vector<double> obs_g, exp_g;
  double acc_o = 0.0, acc_e = 0.0;
  for (int b = 0; b < kBins; ++b) {
    acc_o += hist[static_cast<std::size_t>(b)];
    acc_e += expected[static_cast<std::size_t>(b)];
    if (acc_e >= 5.0) {
      obs_g.push_back(acc_o);
      exp_g.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (exp_g.empty()) {
      obs_g.push_back(acc_o);
      exp_g.push_back(acc_e);
    } else {
      obs_g.back() += acc_o;
      exp_g.back() += acc_e;
    }
  }
  rep.dof = static_cast<int>(exp_g.size()) - 1;
  if (rep.dof < 2) {
    rep.notes = "too few particles for the histogram test";
  } else {
    for (std::size_t g = 0; g < exp_g.size(); ++g) {
      const double diff = obs_g[g] - exp_g[g];
      rep.chi2 += diff * diff / exp_g[g];
    }
    rep.p_value = boost::math::gamma_q(0.5 * rep.dof, 0.5 * rep.chi2);
    rep.histogram = rep.p_value > alpha ? Verdict::Pass : Verdict::Fail;
  }
  rep.order = std::abs(rep.phi_mean - rep.phi_target) <= phi_tol ? Verdict::Pass : Verdict::Fail;
  if (rep.notes.empty() && exp_g.size() < static_cast<std::size_t>(kBins))
    rep.notes = std::to_string(kBins - exp_g.size()) + " sparse bins merged";
  return rep;
}

}  // namespace vh
