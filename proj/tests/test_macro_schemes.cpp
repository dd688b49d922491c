#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vh/error.hpp"
#include "vh/exact_riemann.hpp"
#include "vh/macro_schemes.hpp"

using namespace vh;

namespace {

constexpr double kPi = std::numbers::pi;
const Scheme kAll[] = {Scheme::Conservative, Scheme::Splitting, Scheme::Upwind, Scheme::SemiConservative};

const ModelCoefficients& k1() {
  static const ModelCoefficients k = make_coefficients(1.0);
  return k;
}

MacroGrid smooth_periodic(std::size_t nx, std::uint64_t seed) {
  MacroGrid g = riemann_grid({1, 1}, {1, 1}, k1(), nx, 10.0, Boundary::Periodic);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ph(0, 2 * kPi);
  const double p1 = ph(gen), p2 = ph(gen);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = 2 * kPi * g.center(i) / g.length();
    g.cells[i] = {1.0 + 0.3 * std::sin(x + p1), 1.0 + 0.4 * std::cos(x + p2)};
  }
  return g;
}

double l1_vs_exact(const MacroGrid& g, const WaveFan& fan, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) s += std::abs(g.cells[i].rho - sample(fan, (g.center(i) - 0.5 * g.length()) / t).rho);
  return s * g.dx;
}

MacroGrid run_to(const MacroGrid& g, Scheme s, double dt, double t_end) {
  SchemeConfig cfg;
  cfg.scheme = s;
  cfg.dt = dt;
  cfg.t_end = t_end;
  return run(g, cfg).final_grid;
}

}  // namespace

TEST_CASE("the conservative scheme rejects headings on the x-axis") {
  const MacroGrid g = riemann_grid({1, 0.0}, {1, 0.0}, k1(), 20, 10.0, Boundary::Neumann);
  CHECK_THROWS_AS(step_conservative(g, 0.02), Error);
}

TEST_CASE("names round-trip") {
  for (Scheme s : kAll) CHECK(parse_scheme(to_string(s)) == s);
  CHECK(parse_boundary("periodic") == Boundary::Periodic);
  CHECK(parse_frame("physical") == Frame::Physical);
  CHECK_THROWS_AS(parse_scheme("roe"), Error);
}

TEST_CASE("constant states are preserved by every scheme") {
  for (Scheme s : kAll)
    for (Boundary bc : {Boundary::Neumann, Boundary::Periodic})
      for (double th : {0.0, 0.7, 1.9, -2.5, kPi}) {
        // The (rho, log|tan(theta/2)|) variables do not exist on the x-axis.
        if (s == Scheme::Conservative && std::sin(th) == 0.0) continue;
        CAPTURE(to_string(s));
        CAPTURE(th);
        const MacroGrid g = riemann_grid({1.7, th}, {1.7, th}, k1(), 50, 10.0, bc);
        SchemeConfig cfg;
        cfg.scheme = s;
        MacroGrid h = g;
        for (int n = 0; n < 10; ++n) h = step(h, cfg, 0.02);
        for (std::size_t i = 0; i < h.nx(); ++i) {
          REQUIRE(std::abs(h.cells[i].rho - 1.7) < 1e-13);
          REQUIRE(circular_distance(h.cells[i].theta, g.cells[i].theta) < 1e-13);
        }
      }
}

TEST_CASE("mass is conserved under periodic boundaries") {
  for (Scheme s : {Scheme::Conservative, Scheme::Splitting, Scheme::SemiConservative}) {
    CAPTURE(to_string(s));
    MacroGrid g = smooth_periodic(100, 11);
    SchemeConfig cfg;
    cfg.scheme = s;
    for (int n = 0; n < 50; ++n) {
      const double before = g.mass();
      g = step(g, cfg, 0.02);
      REQUIRE(std::abs(g.mass() - before) < 1e-12 * before);
    }
  }
}

TEST_CASE("the upwind scheme does not conserve mass on a shock problem") {
  const MacroGrid g = riemann_grid({1, 0.314}, {2, 1.54}, k1(), 200, 10.0, Boundary::Periodic);
  const MacroGrid h = run_to(g, Scheme::Upwind, 0.02, 2.0);
  CHECK(std::abs(h.mass() - g.mass()) > 1e-6);
}

TEST_CASE("splitting keeps unit direction in every cell") {
  MacroGrid g = riemann_grid({1, 0.314}, {2, 1.54}, k1(), 200, 10.0, Boundary::Neumann);
  for (int n = 0; n < 100; ++n) {
    StepStats st;
    g = step_splitting(g, 0.02, 0.05, Exec::Parallel, &st);
    REQUIRE(st.norm_defect <= 1e-12);
    REQUIRE(st.min_discriminant > 0.0);
  }
}

TEST_CASE("positive and negative parts of the Jacobian") {
  const MVSystem sys = MVSystem::rescaled(k1());
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> th(-kPi, kPi), rh(0.1, 4.0);
  for (int i = 0; i < 500; ++i) {
    const PrimState u{rh(gen), th(gen)};
    const SplitJacobian s = split_jacobian(sys, u);
    const Mat2 diff = s.plus - s.minus - sys.jacobian(u);
    REQUIRE(diff.max_abs() < 1e-10 * std::max(1.0, sys.jacobian(u).max_abs()));
  }
}

TEST_CASE("Courant number of the reference grid") {
  const MacroGrid g = riemann_grid({2, 1.7}, {1.12, 0.6}, k1(), 200, 10.0, Boundary::Neumann);
  CHECK(courant_number(g, 0.02) == doctest::Approx(0.778).epsilon(0.002));
}

TEST_CASE("unscaled and rescaled systems agree after x' = x / c1") {
  const auto& k = k1();
  for (Scheme s : kAll) {
    CAPTURE(to_string(s));
    MacroGrid phys = riemann_grid({2, 1.7}, {1.12, 0.6}, k, 100, 10.0, Boundary::Neumann, Frame::Physical);
    MacroGrid resc = riemann_grid({2, 1.7}, {1.12, 0.6}, k, 100, 10.0 / k.c1, Boundary::Neumann, Frame::Rescaled);
    const MacroGrid a = run_to(phys, s, 0.02, 1.0), b = run_to(resc, s, 0.02, 1.0);
    for (std::size_t i = 0; i < a.nx(); ++i) {
      REQUIRE(std::abs(a.cells[i].rho - b.cells[i].rho) < 1e-10);
      REQUIRE(circular_distance(a.cells[i].theta, b.cells[i].theta) < 1e-10);
    }
  }
}

TEST_CASE("all schemes converge to the exact rarefaction") {
  const WaveFan fan = solve_riemann({2, 1.7}, {1.12, 0.6}, k1());
  for (Scheme s : kAll) {
    CAPTURE(to_string(s));
    double prev = 1e9;
    for (int level = 0; level < 3; ++level) {
      const std::size_t nx = 200u << level;
      const double dt = 0.02 / (1 << level);
      const MacroGrid g = run_to(riemann_grid({2, 1.7}, {1.12, 0.6}, k1(), nx, 10.0, Boundary::Neumann), s, dt, 2.0);
      const double err = l1_vs_exact(g, fan, 2.0);
      if (level == 0) CHECK(err < 0.05 * 10.0 * 1.5);
      CHECK(err < prev);
      prev = err;
    }
  }
}

TEST_CASE("conservative scheme tracks the shock speed") {
  const MacroGrid g = run_to(riemann_grid({1, 1.05}, {1.432, 1.7}, k1(), 200, 10.0, Boundary::Neumann),
                             Scheme::Conservative, 0.02, 2.0);
  // Shock at the steepest density jump.
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < g.nx(); ++i)
    if (std::abs(g.cells[i + 1].rho - g.cells[i].rho) > std::abs(g.cells[best + 1].rho - g.cells[best].rho)) best = i;
  const double x = g.center(best) + 0.5 * g.dx;
  CHECK((x - 5.0) / 2.0 == doctest::Approx(-1.585).epsilon(0.05 / 1.585));
}

TEST_CASE("splitting and conservative schemes differ on the two-shock problem") {
  const MacroGrid g = riemann_grid({1, 0.314}, {2, 1.54}, k1(), 200, 10.0, Boundary::Neumann);
  const MacroGrid a = run_to(g, Scheme::Conservative, 0.02, 2.0), b = run_to(g, Scheme::Splitting, 0.02, 2.0);
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.nx(); ++i) l1 += std::abs(a.cells[i].rho - b.cells[i].rho) * a.dx;
  CHECK(l1 > 0.2);
}

TEST_CASE("contact problem: transport for the conservative scheme, structure for splitting") {
  const ModelCoefficients k = make_coefficients(0.2);
  const MacroGrid g = riemann_grid({1, 1}, {1, -1}, k, 200, 10.0, Boundary::Neumann);
  const MacroGrid a = run_to(g, Scheme::Conservative, 0.02, 2.0), b = run_to(g, Scheme::Splitting, 0.02, 2.0);
  double dev_a = 0.0, dev_b = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    dev_a = std::max(dev_a, std::abs(a.cells[i].rho - 1.0));
    dev_b = std::max(dev_b, std::abs(b.cells[i].rho - 1.0));
  }
  CHECK(dev_a < 1e-10);
  CHECK(dev_b > 0.05);
  // The conservative contact travels at c cos(1).
  std::size_t flip = 0;
  for (std::size_t i = 0; i + 1 < a.nx(); ++i)
    if ((a.cells[i].theta > 0) != (a.cells[i + 1].theta > 0)) flip = i;
  const double x = a.center(flip) + 0.5 * a.dx;
  CHECK(std::abs(x - (5.0 + 2.0 * k.c * std::cos(1.0))) < 2 * a.dx);
  for (const auto& u : a.cells) CHECK(std::abs(std::abs(u.theta) - 1.0) < 1e-10);
}

TEST_CASE("run: snapshots, diagnostics and guards") {
  const MacroGrid g = riemann_grid({2, 1.7}, {1.12, 0.6}, k1(), 100, 10.0, Boundary::Neumann);
  SchemeConfig cfg;
  cfg.t_end = 1.0;
  cfg.snapshot_every = 0.25;
  const RunResult r = run(g, cfg);
  REQUIRE(r.snapshots.size() == 5);
  CHECK(r.snapshots.front().t == 0.0);
  CHECK(r.snapshots.back().t == doctest::Approx(1.0));
  CHECK(r.diagnostics.size() == 51);
  cfg.dt = 0.2;
  CHECK_THROWS_AS(run(g, cfg), Error);
  MacroGrid bad = g;
  bad.cells[3].rho = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("serial and parallel steps agree") {
  const MacroGrid g = smooth_periodic(300, 2);
  for (Scheme s : kAll) {
    SchemeConfig a, b;
    a.scheme = b.scheme = s;
    a.exec = Exec::Serial;
    b.exec = Exec::Parallel;
    const MacroGrid x = step(g, a, 0.02), y = step(g, b, 0.02);
    for (std::size_t i = 0; i < g.nx(); ++i) REQUIRE(x.cells[i] == y.cells[i]);
  }
}
