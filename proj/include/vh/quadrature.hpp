#pragma once

#include <functional>
#include <vector>

namespace vh {

/// Gauss-Legendre rule on [-1, 1]. Nodes are strictly interior and sorted.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n);

  /// Integral of f over [a, b].
  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(mid + half * nodes[k]);
    return half * sum;
  }
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature to an absolute
/// tolerance. Throws Errc::numerical when the interval budget runs out.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-10, int max_intervals = 4000);

}  // namespace vh
