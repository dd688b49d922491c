#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace vh {

/// Fixed-size dense matrix for the 2x2 / 3x3 flux Jacobians.
template <std::size_t N>
struct Mat {
  std::array<std::array<double, N>, N> m{};

  static Mat identity() {
    Mat r;
    for (std::size_t i = 0; i < N; ++i) r.m[i][i] = 1.0;
    return r;
  }
  double& operator()(std::size_t i, std::size_t j) { return m[i][j]; }
  double operator()(std::size_t i, std::size_t j) const { return m[i][j]; }

  friend Mat operator+(Mat a, const Mat& b) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) a.m[i][j] += b.m[i][j];
    return a;
  }
  friend Mat operator-(Mat a, const Mat& b) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) a.m[i][j] -= b.m[i][j];
    return a;
  }
  friend Mat operator*(double s, Mat a) {
    for (auto& row : a.m)
      for (auto& v : row) v *= s;
    return a;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t j = 0; j < N; ++j) r.m[i][j] += a.m[i][k] * b.m[k][j];
    return r;
  }
  friend std::array<double, N> operator*(const Mat& a, const std::array<double, N>& v) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r[i] += a.m[i][j] * v[j];
    return r;
  }
  double max_abs() const {
    double r = 0.0;
    for (const auto& row : m)
      for (double v : row) r = std::fmax(r, std::abs(v));
    return r;
  }
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;
using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

inline Mat2 inverse(const Mat2& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Mat2 r;
  r(0, 0) = a(1, 1) / det;
  r(0, 1) = -a(0, 1) / det;
  r(1, 0) = -a(1, 0) / det;
  r(1, 1) = a(0, 0) / det;
  return r;
}

/// Spectral function of a diagonalizable matrix with distinct real
/// eigenvalues: sum_k phi(ev_k) P_k with Lagrange projectors
/// P_k = prod_{j != k} (A - ev_j I) / (ev_k - ev_j).
template <std::size_t N, class Phi>
Mat<N> spectral_apply(const Mat<N>& a, const std::array<double, N>& ev, Phi&& phi) {
  Mat<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    Mat<N> p = Mat<N>::identity();
    for (std::size_t j = 0; j < N; ++j) {
      if (j == k) continue;
      p = (1.0 / (ev[k] - ev[j])) * (p * (a - ev[j] * Mat<N>::identity()));
    }
    out = out + phi(ev[k]) * p;
  }
  return out;
}

}  // namespace vh
