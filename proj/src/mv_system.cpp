#include "vh/mv_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vh {

Mat2 MVSystem::jacobian(const PrimState& u) const {
  const double cs = std::cos(u.theta), sn = std::sin(u.theta);
  Mat2 m;
  m(0, 0) = a * cs;
  m(0, 1) = -a * u.rho * sn;
  m(1, 0) = -lambda * sn / u.rho;
  m(1, 1) = c * cs;
  return m;
}

std::array<double, 2> MVSystem::speeds(double theta) const {
  const double cs = std::cos(theta), sn = std::sin(theta);
  const double disc = std::sqrt((c - a) * (c - a) * cs * cs + 4.0 * a * lambda * sn * sn);
  return {0.5 * ((a + c) * cs - disc), 0.5 * ((a + c) * cs + disc)};
}

std::array<Vec2, 2> MVSystem::eigenvectors(const PrimState& u) const {
  const auto g = speeds(u.theta);
  const double cs = std::cos(u.theta), sn = std::sin(u.theta);
  auto pick = [](Vec2 p, Vec2 q) {
    const double np = std::hypot(p[0], p[1]), nq = std::hypot(q[0], q[1]);
    return np >= 1e-8 * std::max(1.0, nq) ? p : q;
  };
  const Vec2 r1 = pick({a * u.rho * sn, a * cs - g[0]}, {c * cs - g[0], lambda * sn / u.rho});
  const Vec2 r2 = pick({c * cs - g[1], lambda * sn / u.rho}, {a * u.rho * sn, a * cs - g[1]});
  return {r1, r2};
}

Mat2 MVSystem::conservative_jacobian(const PrimState& u) const {
  const double cs = std::cos(u.theta), sn = std::sin(u.theta);
  Mat2 m;
  m(0, 0) = a * cs;
  m(0, 1) = -a * u.rho * sn * sn;
  m(1, 0) = -lambda / u.rho;
  m(1, 1) = c * cs;
  return m;
}

double MVSystem::max_speed_bound() const {
  // |gamma| is even in theta and smooth; dense sampling plus a local polish.
  double best = 0.0, best_t = 0.0;
  constexpr int n = 4096;
  for (int i = 0; i <= n; ++i) {
    const double t = std::numbers::pi * i / n;
    const auto g = speeds(t);
    const double v = std::max(std::abs(g[0]), std::abs(g[1]));
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - std::numbers::pi / n), hi = std::min(std::numbers::pi, best_t + std::numbers::pi / n);
  auto f = [&](double t) {
    const auto g = speeds(t);
    return std::max(std::abs(g[0]), std::abs(g[1]));
  };
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2)) lo = m1;
    else hi = m2;
  }
  return std::max(best, f(0.5 * (lo + hi)));
}

std::array<double, 2> MVSystem::degeneracy_angles() const {
  const double cr = c / a, lr = lambda / a;
  const double t2 = (1.0 / (4.0 * lr)) *
                    ((cr - 1.0) * (cr - 1.0) - 4.0 * lr) * ((cr - 1.0) * (cr - 1.0) - 4.0 * lr) /
                        ((cr + 1.0) * (cr + 1.0)) -
                    (cr - 1.0) * (cr - 1.0) / (4.0 * lr);
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (!(t2 > 0.0)) return {nan, nan};
  const double lo = std::atan(std::sqrt(t2));
  const double hi = std::numbers::pi - lo;
  // Assign each candidate to the family whose speed is stationary there.
  auto slope = [&](int p, double t) {
    const double h = 1e-6;
    return std::abs(speeds(t + h)[static_cast<std::size_t>(p)] - speeds(t - h)[static_cast<std::size_t>(p)]);
  };
  if (slope(0, lo) + slope(1, hi) < slope(0, hi) + slope(1, lo)) return {lo, hi};
  return {hi, lo};
}

}  // namespace vh
