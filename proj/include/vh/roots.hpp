#pragma once

#include <cmath>
#include <utility>

#include "vh/error.hpp"

namespace vh {

/// Safeguarded secant on a sign-changing bracket: a secant step is taken
/// when it lands well inside the bracket, bisection otherwise.
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb, double xtol = 1e-13,
                      int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw Error(Errc::numerical, "root bracket has no sign change");
  for (int it = 0; it < max_iter; ++it) {
    const double width = std::abs(b - a);
    if (width <= xtol * (1.0 + std::abs(a))) break;
    double x = b - fb * (b - a) / (fb - fa);
    const double lo = std::fmin(a, b), hi = std::fmax(a, b);
    const double margin = 0.05 * width;
    if (!(x > lo + margin && x < hi - margin) || it % 4 == 3) x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace vh
