#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vh/error.hpp"
#include "vh/exact_riemann.hpp"

using namespace vh;

namespace {

constexpr double kPi = std::numbers::pi;

const ModelCoefficients& k1() {
  static const ModelCoefficients k = make_coefficients(1.0);
  return k;
}

// Generic 2x2 eigenvalues from the characteristic polynomial.
std::array<double, 2> char_roots(const Mat2& a) {
  const double tr = a(0, 0) + a(1, 1);
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double disc = std::sqrt(tr * tr / 4 - det);
  return {tr / 2 - disc, tr / 2 + disc};
}

double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

}  // namespace

TEST_CASE("eigenvalues at special angles") {
  const auto& k = k1();
  auto e0 = eigen({1.0, 0.0}, k);
  CHECK(e0[0].speed == doctest::Approx(k.c).epsilon(1e-12));
  CHECK(e0[1].speed == doctest::Approx(1.0).epsilon(1e-12));
  auto e90 = eigen({1.3, kPi / 2}, k);
  CHECK(e90[0].speed == doctest::Approx(-std::sqrt(k.lambda_r)).epsilon(1e-12));
  CHECK(e90[1].speed == doctest::Approx(std::sqrt(k.lambda_r)).epsilon(1e-12));
}

TEST_CASE("eigenpairs: characteristic polynomial, residual and strict hyperbolicity") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> th(-kPi, kPi), lr(-3.0, 3.0);
  for (double d : {0.2, 1.0, 5.0}) {
    const ModelCoefficients k = make_coefficients(d);
    const MVSystem sys = MVSystem::rescaled(k);
    for (int i = 0; i < 10000; ++i) {
      const PrimState u{std::exp(lr(gen)), th(gen)};
      const Mat2 a = sys.jacobian(u);
      const auto e = eigen(u, sys);
      REQUIRE(e[1].speed - e[0].speed > 0.0);
      const auto roots = char_roots(a);
      REQUIRE(std::abs(roots[0] - e[0].speed) < 1e-12 * std::max(1.0, a.max_abs()));
      REQUIRE(std::abs(roots[1] - e[1].speed) < 1e-12 * std::max(1.0, a.max_abs()));
      for (int p = 0; p < 2; ++p) {
        const Vec2& r = e[p].right_eigenvector;
        const Vec2 ar = a * r;
        const double res = std::hypot(ar[0] - e[p].speed * r[0], ar[1] - e[p].speed * r[1]);
        REQUIRE(res <= 1e-10 * a.max_abs() * norm(r));
      }
    }
  }
}

TEST_CASE("each speed has one interior extremum where genuine nonlinearity fails") {
  const MVSystem sys = MVSystem::rescaled(k1());
  const auto deg = sys.degeneracy_angles();
  for (int p = 0; p < 2; ++p) {
    // Count sign changes of d gamma_p / d theta on (0, pi).
    int changes = 0;
    double prev = 0.0;
    const int n = 4000;
    for (int i = 1; i < n; ++i) {
      const double t = kPi * i / n, h = 1e-6;
      const double der = sys.speeds(t + h)[p] - sys.speeds(t - h)[p];
      if (i > 1 && (der > 0) != (prev > 0)) ++changes;
      prev = der;
    }
    CHECK(changes == 1);
    // Directional derivative of gamma_p along r_p (rho-independent, so only the theta component matters).
    const double t = deg[p], h = 1e-6;
    const double dg = (sys.speeds(t + h)[p] - sys.speeds(t - h)[p]) / (2 * h);
    CHECK(std::abs(dg) < 1e-6);
  }
  // The closed form for the extremum angle.
  const double c = k1().c, lam = k1().lambda_r;
  const double tan2 = (1.0 / (4 * lam)) * (std::pow((c - 1) * (c - 1) - 4 * lam, 2) / ((c + 1) * (c + 1)) - (c - 1) * (c - 1));
  const double t_closed = std::atan(std::sqrt(tan2));
  const bool matches = std::abs(deg[0] - t_closed) < 1e-6 || std::abs(deg[0] - (kPi - t_closed)) < 1e-6 ||
                       std::abs(deg[1] - t_closed) < 1e-6 || std::abs(deg[1] - (kPi - t_closed)) < 1e-6;
  CHECK(matches);
}

TEST_CASE("Riemann invariants are constant along rarefaction curves") {
  const auto& k = k1();
  const PrimState a{2.0, 1.7};
  for (double t : {1.5, 1.2, 0.9, 0.6}) {
    const PrimState u = rarefaction_curve(a, 1, t, k);
    CHECK(riemann_invariant(u, 1, 1.7, k) == doctest::Approx(riemann_invariant(a, 1, 1.7, k)).epsilon(1e-6));
  }
  const PrimState b{1.0, 0.8};
  for (double t : {1.0, 1.4, 2.0}) {
    const PrimState u = rarefaction_curve(b, 2, t, k);
    CHECK(std::abs(riemann_invariant(u, 2, 0.8, k) - riemann_invariant(b, 2, 0.8, k)) < 1e-6);
  }
  // Scaling rho by a constant shifts the invariant by its log.
  const PrimState s{2.0 * 3.5, 1.1};
  CHECK(riemann_invariant(s, 1, 1.7, k) - riemann_invariant({2.0, 1.1}, 1, 1.7, k) ==
        doctest::Approx(std::log(3.5)).epsilon(1e-12));
  // The two states of the rarefaction example share the 1-invariant to the solver tolerance.
  CHECK(std::abs(riemann_invariant({2.0, 1.7}, 1, 1.7, k) - riemann_invariant({1.12, 0.60}, 1, 1.7, k)) < 5e-3);
}

TEST_CASE("rarefaction curve tangent is parallel to the eigenvector") {
  const auto& k = k1();
  const PrimState a{2.0, 1.7};
  CHECK(rarefaction_curve(a, 1, 1.7, k) == a);
  for (double t : {1.6, 1.2, 0.8}) {
    const double h = 1e-5;
    const PrimState p = rarefaction_curve(a, 1, t + h, k), m = rarefaction_curve(a, 1, t - h, k);
    const Vec2 tan{(p.rho - m.rho) / (2 * h), 1.0};
    const auto e = eigen(rarefaction_curve(a, 1, t, k), k);
    const Vec2 r = e[0].right_eigenvector;
    CHECK(std::abs(cross(tan, r)) / (norm(tan) * norm(r)) < 1e-4);
  }
  // gamma_1 grows from the left state towards the admissible side.
  const MVSystem sys = MVSystem::rescaled(k);
  double prev = sys.speeds(1.7)[0];
  for (double t = 1.6; t > 0.6; t -= 0.1) {
    const double g = sys.speeds(t)[0];
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("Hugoniot locus through the shock example") {
  const auto& k = k1();
  const PrimState l{1.0, 1.05}, r{1.432, 1.7};
  CHECK(hugoniot_residual(l, l, k) == 0.0);
  CHECK(std::abs(hugoniot_residual(l, r, k)) < 1e-2);
  const ShockSpeed s = shock_speed(l, r, k);
  CHECK(s.s == doctest::Approx(-1.585).epsilon(0.01 / 1.585));

  // Each term is a product of two jumps, so swapping the states leaves the
  // residual unchanged.
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> th(0.1, kPi - 0.1), rh(0.2, 5.0);
  for (int i = 0; i < 200; ++i) {
    const PrimState a{rh(gen), th(gen)}, b{rh(gen), th(gen)};
    REQUIRE(hugoniot_residual(a, b, k) == doctest::Approx(hugoniot_residual(b, a, k)).epsilon(1e-12));
  }
}

TEST_CASE("both jump conditions agree on locus points") {
  const auto& k = k1();
  const PrimState a{1.0, 1.05};
  for (double t : {1.2, 1.5, 1.7, 2.0}) {
    const double rho = hugoniot_density(a, 1, t, k);
    const PrimState b{rho, t};
    CHECK(std::abs(hugoniot_residual(a, b, k)) < 1e-9);
    const ShockSpeed s = shock_speed(a, b, k);
    CHECK(s.relative_mismatch < 1e-6);
  }
  CHECK(hugoniot_density(a, 1, 1.7, k) == doctest::Approx(1.429816).epsilon(1e-5));
}

TEST_CASE("weak shocks travel at the characteristic speed and are tangent to r_p") {
  const auto& k = k1();
  const MVSystem sys = MVSystem::rescaled(k);
  const PrimState a{1.0, 1.05};
  const double h = 1e-4;
  const double rho = hugoniot_density(a, 1, a.theta + h, k);
  const ShockSpeed s = shock_speed(a, {rho, a.theta + h}, k);
  CHECK(s.s == doctest::Approx(sys.speeds(a.theta)[0]).epsilon(1e-3));
  const auto e = eigen(a, k);
  const Vec2 tan{(rho - a.rho) / h, 1.0};
  CHECK(std::abs(cross(tan, e[0].right_eigenvector)) / (norm(tan) * norm(e[0].right_eigenvector)) < 1e-3);
}

TEST_CASE("Riemann fans") {
  const auto& k = k1();
  SUBCASE("trivial") {
    const PrimState u{1.3, 0.7};
    const WaveFan f = solve_riemann(u, u, k);
    CHECK(f.middle == u);
    CHECK(f.wave1.strength == 0.0);
    CHECK(f.wave2.strength == 0.0);
  }
  SUBCASE("rarefaction example") {
    const WaveFan f = solve_riemann({2.0, 1.7}, {1.12, 0.60}, k);
    CHECK(f.wave1.kind == WaveKind::Rarefaction);
    CHECK(f.middle.rho == doctest::Approx(1.12248291).epsilon(1e-5));
    CHECK(f.middle.theta == doctest::Approx(0.5967372).epsilon(1e-5));
    CHECK(f.wave2.strength < 0.01);
  }
  SUBCASE("shock example") {
    const WaveFan f = solve_riemann({1.0, 1.05}, {1.432, 1.7}, k);
    CHECK(f.wave1.kind == WaveKind::Shock);
    CHECK(f.wave1.speed_tail == doctest::Approx(-1.585).epsilon(0.01 / 1.585));
    CHECK(f.wave2.strength < 0.01);
  }
  SUBCASE("two-wave fan") {
    const WaveFan f = solve_riemann({1.0, 0.314}, {2.0, 1.54}, k);
    CHECK(f.middle.rho == doctest::Approx(2.002213).epsilon(1e-5));
    CHECK(f.middle.theta == doctest::Approx(1.538032).epsilon(1e-5));
    CHECK(f.wave1.kind == WaveKind::Shock);
    CHECK(f.wave2.kind == WaveKind::Shock);
    CHECK(f.wave1.speed_head <= f.wave2.speed_tail);
  }
  SUBCASE("sampling outside the fan") {
    const WaveFan f = solve_riemann({1.0, 0.314}, {2.0, 1.54}, k);
    for (double xi : {f.min_speed() - 0.01, f.min_speed() - 1.0, -50.0}) CHECK(sample(f, xi) == f.left);
    for (double xi : {f.max_speed() + 0.01, f.max_speed() + 1.0, 50.0}) CHECK(sample(f, xi) == f.right);
  }
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(solve_riemann({-1.0, 0.1}, {1.0, 0.2}, k1()), Error);
  CHECK_THROWS_AS(rarefaction_curve({1.0, 0.5}, 3, 0.6, k1()), Error);
}
