#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vh/csv.hpp"
#include "vh/error.hpp"
#include "vh/suite.hpp"

using namespace vh;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parse_error(const std::string& text) {
  try {
    parse_suite(text, "t.suite");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vh_test_" + name);
  fs::remove_all(p);
  return p;
}

const char* kSmall = R"(
scenarios:
  - name: rare
    d: 1
    left: {rho: 2, theta: 1.7}
    right: {rho: 1.12, theta: 0.6}
    macro: {nx: 50, t_end: 0.5}
  - name: contact
    d: 0.2
    left: {rho: 1, theta: 1}
    right: {rho: 1, theta: -1}
    exact: false
    schemes: [cons, split]
    macro: {nx: 40, t_end: 0.2}
    micro: {N: 2000, ensemble: 2, t_end: 0.05, bins: 20, macro_nx: 40}
  - name: broken
    d: 1
    left: {rho: 1, theta: 0}
    right: {rho: 2, theta: 0}
    exact: false
    schemes: [cons]
    macro: {nx: 20, t_end: 0.1}
)";

}  // namespace

TEST_CASE("built-in suite") {
  const auto s = load_suite(VH_SOURCE_DIR "/suites/riemann.suite");
  REQUIRE(s.size() >= 5);
  auto find = [&](const std::string& n) -> const Scenario& {
    for (const auto& x : s)
      if (x.name == n) return x;
    FAIL("missing " << n);
    return s.front();
  };
  CHECK(find("rarefaction").left == PrimState{2, 1.7});
  CHECK(find("rarefaction").right == PrimState{1.12, 0.6});
  CHECK(find("shock").right == PrimState{1.432, 1.7});
  CHECK(find("split_vs_cons").left == PrimState{1, 0.314});
  CHECK(find("split_vs_cons").d == 1.0);
  CHECK(find("contact").d == 0.2);
  CHECK(find("contact").right == PrimState{1, -1});
  CHECK_FALSE(find("contact").exact);
  CHECK(find("contact").micro.has_value());
  CHECK(find("shock_2d").left == PrimState{1, 1.5});
  CHECK(find("shock_2d").right == PrimState{2, 1.83});
  CHECK(find("rarefaction").macro.nx == 200);
  CHECK(find("rarefaction").macro.dt == 0.02);
}

TEST_CASE("suite parsing errors") {
  CHECK(parse_suite("").empty());
  CHECK(parse_suite("# nothing\n").empty());
  CHECK(parse_suite("scenarios:\n").empty());

  std::string e = parse_error("scenarios:\n  - name: a\n    d: 1\n    left: {rho: 1, theta: 0.1}\n    right: {rho: 1, theta: 0.2}\n    macro: {nx: twelve}\n");
  CHECK(e.find("'nx'") != std::string::npos);
  CHECK(e.find("t.suite:6") != std::string::npos);

  e = parse_error("scenarios:\n  - name: a\n    d: one\n    left: {rho: 1, theta: 0.1}\n    right: {rho: 1, theta: 0.2}\n");
  CHECK(e.find("'d'") != std::string::npos);

  e = parse_error("scenarios:\n  - name: a\n    d: 1\n    colour: red\n    left: {rho: 1, theta: 0.1}\n    right: {rho: 1, theta: 0.2}\n");
  CHECK(e.find("unknown key 'colour'") != std::string::npos);
  CHECK(e.find("t.suite:4") != std::string::npos);

  e = parse_error("scenarios:\n  - {name: a, d: 1, left: {rho: 1, theta: 0}, right: {rho: 1, theta: 0}}\n"
                  "  - {name: a, d: 1, left: {rho: 1, theta: 0}, right: {rho: 1, theta: 0}}\n");
  CHECK(e.find("duplicate") != std::string::npos);

  e = parse_error("scenarios:\n  - {name: a, d: 1, left: {rho: -1, theta: 0}, right: {rho: 1, theta: 0}}\n");
  CHECK(e.find("rho") != std::string::npos);
  e = parse_error("scenarios:\n  - {name: a, d: 1, schemes: [roe], left: {rho: 1, theta: 0}, right: {rho: 1, theta: 0}}\n");
  CHECK(e.find("roe") != std::string::npos);
  e = parse_error("scenarios: [\n");
  CHECK_FALSE(e.empty());
  CHECK_THROWS_AS(load_suite("/nonexistent/x.suite"), Error);
}

TEST_CASE("profile CSV round trip") {
  const fs::path dir = scratch_dir("csv");
  fs::create_directories(dir);
  Profile p;
  p.bin_centers = {0.05, 0.15, 0.25, 0.35};
  p.rho = {1.0 / 3.0, 2.0, 0.1, 1e-17};
  p.theta_mean = {0.1, std::nan(""), -3.0, 3.14159};
  p.circ_var = {0.2, std::nan(""), 0.0, 1.0};
  write_profile_csv((dir / "p.csv").string(), p);
  const Profile q = read_profile_csv((dir / "p.csv").string());
  CHECK(q.bin_centers == p.bin_centers);
  CHECK(q.rho == p.rho);
  CHECK(std::isnan(q.theta_mean[1]));
  CHECK(q.theta_mean[3] == p.theta_mean[3]);
  CHECK(slurp(dir / "p.csv").find("0.15,2,,\n") != std::string::npos);

  std::ofstream(dir / "bad.csv") << "x,rho,theta\n0.1,1,abc\n";
  CHECK_THROWS_AS(read_profile_csv((dir / "bad.csv").string()), Error);
  std::ofstream(dir / "hdr.csv") << "a,b\n";
  CHECK_THROWS_AS(read_profile_csv((dir / "hdr.csv").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("suite runs are deterministic and isolate failures") {
  const auto suite = parse_suite(kSmall);
  const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
  SuiteOptions opts;
  const SuiteResult ra = run_suite(suite, a.string(), opts);
  const SuiteResult rb = run_suite(suite, b.string(), opts);
  REQUIRE(ra.scenarios.size() == 3);
  CHECK(ra.failed() == 1);
  CHECK(ra.scenarios[0].ok);
  CHECK(ra.scenarios[1].ok);
  CHECK_FALSE(ra.scenarios[2].ok);
  for (const char* f : {"summary.json", "rare/macro_cons.csv", "rare/exact.csv", "contact/micro.csv",
                        "contact/micro_vs_split.csv", "contact/macro_split.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "summary.json").find("\"l1_rho_exact\"") != std::string::npos);

  SuiteOptions par = opts;
  par.workers = 3;
  const fs::path c = scratch_dir("run_c");
  run_suite(suite, c.string(), par);
  CHECK(slurp(a / "summary.json") == slurp(c / "summary.json"));
  CHECK(slurp(a / "contact/micro.csv") == slurp(c / "contact/micro.csv"));

  SuiteOptions seeded = opts;
  seeded.seed = 99;
  seeded.only = {"contact"};
  const fs::path d = scratch_dir("run_d");
  const SuiteResult rd = run_suite(suite, d.string(), seeded);
  CHECK(rd.scenarios.size() == 1);
  CHECK_FALSE(fs::exists(d / "rare"));
  CHECK(slurp(a / "contact/micro.csv") != slurp(d / "contact/micro.csv"));

  SuiteOptions skip = opts;
  skip.skip_micro = true;
  skip.only = {"contact"};
  const fs::path e = scratch_dir("run_e");
  run_suite(suite, e.string(), skip);
  CHECK_FALSE(fs::exists(e / "contact/micro.csv"));

  SuiteOptions bad = opts;
  bad.only = {"nope"};
  CHECK_THROWS_AS(run_suite(suite, e.string(), bad), Error);
  for (const auto& p : {a, b, c, d, e}) fs::remove_all(p);
}
