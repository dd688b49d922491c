#include "vh/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vh/error.hpp"
#include "vh/quadrature.hpp"

namespace vh {

namespace {

void require_positive_d(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    std::ostringstream os;
    os << "noise intensity d must be positive, got " << d;
    throw Error(Errc::domain, os.str());
  }
}

// Thomas algorithm; lower[i] couples row i to i-1, upper[i] to i+1.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  double min_pivot = std::abs(diag[0]);
  double max_pivot = min_pivot;
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw Error(Errc::numerical, "zero pivot in tridiagonal solve");
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
    min_pivot = std::min(min_pivot, std::abs(diag[i]));
    max_pivot = std::max(max_pivot, std::abs(diag[i]));
  }
  if (min_pivot <= max_pivot * 1e-15) {
    std::ostringstream os;
    os << "singular FEM system, pivot ratio " << min_pivot / max_pivot;
    throw Error(Errc::numerical, os.str());
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

double EllipticSolution::h_at(double x) const {
  const std::size_t n = nodes.size() - 1;
  double s = (x + 1.0) / dx;
  s = std::clamp(s, 0.0, static_cast<double>(n));
  auto k = static_cast<std::size_t>(s);
  if (k >= n) k = n - 1;
  const double t = s - static_cast<double>(k);
  return (1.0 - t) * h_values[k] + t * h_values[k + 1];
}

EllipticSolution solve_g(double d, double dx) {
  require_positive_d(d);
  if (!(dx > 0.0 && dx < 0.1)) throw Error(Errc::domain, "mesh step must lie in (0, 0.1)");
  const auto n_el = static_cast<std::size_t>(std::lround(2.0 / dx));
  const double h = 2.0 / static_cast<double>(n_el);
  if (h / d > 600.0) throw Error(Errc::domain, "mesh too coarse for the boundary layer of this d");

  // Galerkin in the weighted unknown h = g / sqrt(1-x^2). With g = s h,
  // v = s w (s^2 = 1-x^2) the weak form
  //   int M (1-x^2) g'v' + M g v / (1-x^2) = -int sqrt(1-x^2) M v
  // becomes, after one integration by parts of the cross term,
  //   int M s^2 [ s^2 h'w' + (2 + x/d) h w ] = -int M s^2 w.
  // g inherits the zero trace; h is free at the end nodes.
  // Row i is scaled by exp(-x_i/d) so that M never overflows.
  const std::size_t n_nodes = n_el + 1;
  std::vector<double> x(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) x[i] = -1.0 + h * static_cast<double>(i);
  x.back() = 1.0;

  constexpr std::array<double, 4> gp = {-0.861136311594052575, -0.339981043584856265,
                                        0.339981043584856265, 0.861136311594052575};
  constexpr std::array<double, 4> gw = {0.347854845137453857, 0.652145154862546143,
                                        0.652145154862546143, 0.347854845137453857};

  std::vector<double> lower(n_nodes, 0.0), diag(n_nodes, 0.0), upper(n_nodes, 0.0), rhs(n_nodes, 0.0);
  for (std::size_t e = 0; e < n_el; ++e) {
    const double xa = x[e], xb = x[e + 1];
    const double mid = 0.5 * (xa + xb);
    for (std::size_t q = 0; q < gp.size(); ++q) {
      const double xq = mid + 0.5 * h * gp[q];
      const double wq = 0.5 * h * gw[q];
      const double s2 = 1.0 - xq * xq;
      const std::array<double, 2> phi = {(xb - xq) / h, (xq - xa) / h};
      const std::array<double, 2> dphi = {-1.0 / h, 1.0 / h};
      for (std::size_t a = 0; a < 2; ++a) {
        const std::size_t row = e + a;
        const double weight = wq * std::exp((xq - x[row]) / d) * s2;
        for (std::size_t b = 0; b < 2; ++b) {
          const double val = weight * (s2 * dphi[a] * dphi[b] + (2.0 + xq / d) * phi[a] * phi[b]);
          if (a == b) diag[row] += val;
          else if (b < a) lower[row] += val;
          else upper[row] += val;
        }
        rhs[row] -= weight * phi[a];
      }
    }
  }

  std::vector<double> hv = solve_tridiagonal(lower, diag, upper, rhs);

  double res = 0.0, scale = 0.0, hmax = 0.0;
  for (double v : hv) hmax = std::max(hmax, std::abs(v));
  for (std::size_t i = 0; i < n_nodes; ++i) {
    double r = diag[i] * hv[i] - rhs[i];
    double row_norm = std::abs(diag[i]);
    if (i > 0) {
      r += lower[i] * hv[i - 1];
      row_norm += std::abs(lower[i]);
    }
    if (i + 1 < n_nodes) {
      r += upper[i] * hv[i + 1];
      row_norm += std::abs(upper[i]);
    }
    res = std::max(res, std::abs(r));
    scale = std::max(scale, row_norm * hmax + std::abs(rhs[i]));
  }

  EllipticSolution out;
  out.d = d;
  out.dx = h;
  out.residual = res / scale;
  if (!(out.residual < 1e-12)) {
    std::ostringstream os;
    os << "FEM residual " << out.residual << " above tolerance";
    throw Error(Errc::numerical, os.str());
  }
  out.nodes = std::move(x);
  out.h_values = std::move(hv);
  out.g_values.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double s2 = std::max(0.0, 1.0 - out.nodes[i] * out.nodes[i]);
    out.g_values[i] = std::sqrt(s2) * out.h_values[i];
  }
  out.g_values.front() = 0.0;
  out.g_values.back() = 0.0;
  return out;
}

double c1_closed_form(double d) {
  require_positive_d(d);
  const double x = 1.0 / d;
  if (x > kCothSaturation) return 1.0 - d;
  // coth(x) - 1/x loses digits to cancellation for small x; Laurent series instead.
  if (x < 1e-2) {
    const double x2 = x * x;
    return x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0;
  }
  return 1.0 / std::tanh(x) - d;
}

double c1_quadrature(double d, int n) {
  require_positive_d(d);
  if (n < 64) throw Error(Errc::domain, "c1 quadrature needs at least 64 points");
  const GaussLegendre rule(n);
  // Weight exp((cos t - 1)/d) is M up to a constant factor that cancels.
  const double num = rule.integrate(
      [d](double t) { return std::cos(t) * std::exp((std::cos(t) - 1.0) / d) * std::sin(t); }, 0.0,
      std::numbers::pi);
  const double den = rule.integrate(
      [d](double t) { return std::exp((std::cos(t) - 1.0) / d) * std::sin(t); }, 0.0, std::numbers::pi);
  return num / den;
}

double c2_from_g(double d, const EllipticSolution& g, int n) {
  require_positive_d(d);
  if (g.d != d) {
    std::ostringstream os;
    os << "elliptic solution computed for d=" << g.d << ", requested d=" << d;
    throw Error(Errc::usage, os.str());
  }
  if (n < 64) throw Error(Errc::domain, "c2 quadrature needs at least 64 points");
  const GaussLegendre rule(n);
  // sin^2 h M sin = sin^3 h M; GL nodes never reach t = 0 or pi.
  auto density = [&](double t) {
    const double s = std::sin(t);
    return s * s * s * g.h_at(std::cos(t)) * std::exp((std::cos(t) - 1.0) / d);
  };
  const double num = rule.integrate([&](double t) { return std::cos(t) * density(t); }, 0.0, std::numbers::pi);
  const double den = rule.integrate(density, 0.0, std::numbers::pi);
  const double c2 = num / den;
  if (!std::isfinite(c2)) throw Error(Errc::numerical, "c2 quadrature produced a non-finite value");
  return c2;
}

ModelCoefficients make_coefficients(double d, double dx, int n) {
  require_positive_d(d);
  ModelCoefficients k;
  k.d = d;
  k.c1 = c1_closed_form(d);
  const EllipticSolution g = solve_g(d, dx);
  k.c2 = c2_from_g(d, g, n);
  k.lambda = d;
  k.c = k.c2 / k.c1;
  k.lambda_r = k.lambda / k.c1;
  return k;
}

}  // namespace vh
