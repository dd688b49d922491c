#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vh/analysis.hpp"
#include "vh/error.hpp"
#include "vh/quadrature.hpp"
#include "vh/von_mises.hpp"

using namespace vh;

namespace {

constexpr double kPi = std::numbers::pi;

Profile make_profile(std::size_t n, double L, auto&& rho, auto&& theta) {
  Profile p;
  const double w = L / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 0.5) * w;
    p.bin_centers.push_back(x);
    p.rho.push_back(rho(x));
    p.theta_mean.push_back(theta(x));
    p.circ_var.push_back(0.0);
  }
  return p;
}

Profile random_profile(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> r(0.5, 2.0), t(-kPi, kPi);
  return make_profile(40, 10.0, [&](double) { return r(gen); }, [&](double) { return t(gen); });
}

}  // namespace

TEST_CASE("Bessel I0 against its defining integral") {
  for (double z : {0.01, 0.1, 0.5, 1.0, 3.0, 5.0, 10.0, 19.9, 20.0, 20.1, 35.0, 50.0, 100.0, 200.0, 350.0}) {
    CAPTURE(z);
    const double ref = integrate_adaptive([z](double t) { return std::exp(z * (std::cos(t) - 1.0)); }, 0.0, kPi, 1e-15).value / kPi;
    CHECK(std::abs(bessel_i0e(z) - ref) <= 1e-10 * ref);
  }
  CHECK(bessel_i0(1.0) == doctest::Approx(1.2660658777520082).epsilon(1e-14));
}

TEST_CASE("circular law: normalization, symmetry, mode") {
  for (double d : {0.05, 0.2, 1.0, 5.0}) {
    for (double center : {0.0, 1.3, -2.9}) {
      const VonMises vm(d, center);
      const double total = integrate_adaptive([&](double a) { return von_mises_pdf(vm, a); }, -kPi, kPi, 1e-13).value;
      CHECK(std::abs(total - 1.0) < 1e-10);
      for (double a : {0.1, 0.7, 2.0, 3.0}) {
        CHECK(vm.pdf(center + a) == doctest::Approx(vm.pdf(center - a)).epsilon(1e-13));
        CHECK(vm.pdf(center + a) < vm.pdf(center));
      }
      // log pdf is affine in cos(angle - center).
      const double l0 = std::log(vm.pdf(center + 0.3)), l1 = std::log(vm.pdf(center + 1.1)), l2 = std::log(vm.pdf(center + 2.4));
      const double c0 = std::cos(0.3), c1 = std::cos(1.1), c2 = std::cos(2.4);
      CHECK((l1 - l0) / (c1 - c0) == doctest::Approx((l2 - l1) / (c2 - c1)).epsilon(1e-10));
      CHECK(vm.cdf(center + kPi) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(vm.cdf(center) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(VonMises(0.0), Error);
  CHECK_THROWS_AS(VonMises(-1.0), Error);
}

// The mean resultant of the circular law is I1(1/d)/I0(1/d). The coefficient
// c1(d) = coth(1/d) - d is the mean of cos on the sphere instead, so the two
// differ (0.893 vs 0.800 at d = 0.2).
TEST_CASE("mean resultant length of the circular law") {
  for (double d : {0.1, 0.2, 1.0, 5.0}) {
    const VonMises vm(d, 0.4);
    const double m = integrate_adaptive([&](double a) { return std::cos(a - 0.4) * vm.pdf(a); }, -kPi, kPi, 1e-14).value;
    CHECK(std::abs(m - vm.mean_resultant()) < 1e-10);
    CHECK(vm.mean_resultant() == doctest::Approx(bessel_i1e(1 / d) / bessel_i0e(1 / d)).epsilon(1e-14));
  }
  CHECK(VonMises(0.2).mean_resultant() == doctest::Approx(0.8934).epsilon(1e-4));
  CHECK(c1_closed_form(0.2) == doctest::Approx(0.8001).epsilon(1e-4));
}

TEST_CASE("samples of the circular law") {
  const VonMises vm(0.5, -1.0);
  StreamRng rng(11, 2, 3);
  double sx = 0, sy = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double a = vm.sample(rng);
    REQUIRE(a > -kPi);
    REQUIRE(a <= kPi);
    sx += std::cos(a);
    sy += std::sin(a);
  }
  CHECK(std::hypot(sx, sy) / n == doctest::Approx(vm.mean_resultant()).epsilon(5e-3));
  CHECK(std::atan2(sy, sx) == doctest::Approx(-1.0).epsilon(5e-3));
}

TEST_CASE("profile comparison is a pseudometric") {
  std::mt19937_64 gen(4);
  for (int it = 0; it < 100; ++it) {
    const Profile a = random_profile(gen), b = random_profile(gen), c = random_profile(gen);
    const auto aa = compare_profiles(a, a);
    REQUIRE(aa.l1_rho == 0.0);
    REQUIRE(aa.l1_theta == 0.0);
    const auto ab = compare_profiles(a, b), ba = compare_profiles(b, a);
    REQUIRE(ab.l1_rho == doctest::Approx(ba.l1_rho));
    REQUIRE(ab.l1_theta == doctest::Approx(ba.l1_theta));
    const auto bc = compare_profiles(b, c), ac = compare_profiles(a, c);
    REQUIRE(ac.l1_rho <= ab.l1_rho + bc.l1_rho + 1e-12);
    REQUIRE(ac.l1_theta <= ab.l1_theta + bc.l1_theta + 1e-12);
    REQUIRE(ab.l1_rho >= 0.0);
  }
}

TEST_CASE("profile comparison details") {
  const Profile a = make_profile(20, 10, [](double) { return 1.0; }, [](double) { return 3.1; });
  Profile b = make_profile(20, 10, [](double) { return 1.5; }, [](double) { return -3.1; });
  const auto r = compare_profiles(a, b);
  CHECK(r.l1_rho == doctest::Approx(5.0));
  CHECK(r.l1_theta == doctest::Approx(10.0 * (2 * kPi - 6.2)));
  b.theta_mean[3] = std::nan("");
  const auto r2 = compare_profiles(a, b);
  CHECK(r2.l1_theta == doctest::Approx(9.5 * (2 * kPi - 6.2)));
  CHECK(r2.notes.size() == 1);
  const Profile c = make_profile(21, 10, [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK_THROWS_AS(compare_profiles(a, c), Error);
}

TEST_CASE("shock locator") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(3.0, 7.0);
  for (int it = 0; it < 50; ++it) {
    const double x0 = u(gen);
    const Profile p = make_profile(100, 10, [&](double x) { return 1.5 + 0.5 * std::tanh((x - x0) / 0.2); }, [](double) { return 0.0; });
    REQUIRE(std::abs(locate_shock(p) - x0) < 0.1 * p.bin_width());
  }
  const Profile two = make_profile(100, 10, [](double x) { return x < 2 ? 1.0 : (x < 7 ? 3.0 : 2.5); }, [](double) { return 0.0; });
  CHECK(locate_shock(two) == doctest::Approx(2.0));
  CHECK(locate_shock(two, std::make_pair(5.0, 9.0)) == doctest::Approx(7.0));
  const Profile flat = make_profile(10, 10, [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK(std::isnan(locate_shock(flat)));
}

TEST_CASE("sampling macro grids and fans on bins") {
  const ModelCoefficients k = make_coefficients(1.0);
  MacroGrid g = riemann_grid({2, 1.7}, {1.12, 0.6}, k, 200, 10.0, Boundary::Periodic);
  std::vector<double> centers;
  for (int b = 0; b < 50; ++b) centers.push_back((b + 0.5) * 0.2);
  Profile p = profile_from_grid(g, centers, 0.2);
  double mass = 0.0;
  for (double r : p.rho) mass += r * 0.2;
  CHECK(mass == doctest::Approx(g.mass()).epsilon(1e-13));
  CHECK(p.rho[0] == doctest::Approx(2.0));
  CHECK(p.theta_mean[49] == doctest::Approx(0.6));
  // A bin straddling the periodic seam averages both ends.
  const Profile seam = profile_from_grid(g, {0.0}, 0.2);
  CHECK(seam.rho[0] == doctest::Approx(0.5 * (2.0 + 1.12)));

  const WaveFan fan = solve_riemann({2, 1.7}, {1.12, 0.6}, k);
  const Profile f = profile_from_fan(fan, centers, 5.0, 2.0);
  for (std::size_t b = 0; b < centers.size(); ++b) CHECK(f.rho[b] == sample(fan, (centers[b] - 5.0) / 2.0).rho);
  CHECK_THROWS_AS(profile_from_fan(fan, centers, 5.0, 0.0), Error);
}

TEST_CASE("radial vortex is a stationary state") {
  for (double d : {0.2, 1.0, 5.0}) {
    CAPTURE(d);
    const ModelCoefficients k = make_coefficients(d);
    double prev = 0.0;
    for (int n = 200; n <= 3200; n *= 2) {
      const VortexResidual r = vortex_residual(1.0, k, 1.0, 2.0, n, n);
      CHECK(r.divergence < 1e-10);
      if (prev > 0.0) {
        CHECK(prev / r.max() > 3.8);
        CHECK(prev / r.max() < 4.2);
      }
      prev = r.max();
    }
    CHECK(prev < 1e-6);
    const double coarse = vortex_residual(1.0, k, 1.0, 2.0, 200, 200, 1.1).max();
    const double fine = vortex_residual(1.0, k, 1.0, 2.0, 3200, 3200, 1.1).max();
    CHECK(fine > 0.5 * coarse);
  }
  CHECK_THROWS_AS(vortex_residual(1.0, make_coefficients(1.0), 0.0, 1.0, 10, 10), Error);
}

TEST_CASE("equilibrium checks on synthetic headings") {
  const VonMises vm(0.2, 0.0);
  SUBCASE("circular-law samples pass the histogram test") {
    StreamRng rng(1, 0, 0);
    std::vector<std::vector<double>> snaps(30, std::vector<double>(500));
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const double drift = 0.1 * s;  // the mean direction may wander
      for (auto& a : snaps[s]) a = wrap_angle(vm.sample(rng) + drift);
    }
    const EquilibriumReport r = equilibrium_checks(snaps, 0.2);
    CHECK(r.histogram == Verdict::Pass);
    CHECK(r.snapshots_used == 20);
    CHECK(r.phi_mean == doctest::Approx(vm.mean_resultant()).epsilon(0.02));
    CHECK(r.phi_target == doctest::Approx(c1_closed_form(0.2)));
  }
  SUBCASE("uniform headings fail") {
    StreamRng rng(2, 0, 0);
    std::vector<std::vector<double>> snaps(30, std::vector<double>(500));
    for (auto& s : snaps)
      for (auto& a : s) a = wrap_angle(2 * kPi * rng.uniform());
    const EquilibriumReport r = equilibrium_checks(snaps, 0.2);
    CHECK(r.histogram == Verdict::Fail);
    CHECK(r.order == Verdict::Fail);
  }
  SUBCASE("too few snapshots are inconclusive") {
    std::vector<std::vector<double>> snaps(2, std::vector<double>(500, 0.0));
    const EquilibriumReport r = equilibrium_checks(snaps, 0.2);
    CHECK(r.histogram == Verdict::Inconclusive);
    CHECK(r.order == Verdict::Inconclusive);
  }
}
