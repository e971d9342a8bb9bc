#include <doctest.h>

#include "sskit/report.hpp"
#include "sskit/suites.hpp"

#include <cmath>
#include <limits>

using namespace sskit;

TEST_CASE("checks and requirements") {
  VerificationReport r("demo");
  CHECK(r.check("a", "anchor a", 1e-13, 1e-12));
  CHECK(r.passed());
  CHECK_FALSE(r.check("nan", "anchor", std::numeric_limits<double>::quiet_NaN(), 1.0));
  CHECK_FALSE(r.passed());
  VerificationReport q("demo");
  CHECK(q.require("yes", "anchor", true));
  CHECK_FALSE(q.require("no", "anchor", false));
  CHECK(q.checks().back().tolerance == 0.0);
}

TEST_CASE("convergence entries") {
  VerificationReport r("demo");
  CHECK(r.converge("second order", "x", {10, 20}, {1e-2, 2.5e-3}, 1.9));
  CHECK(r.convergence().back().fitted_order == doctest::Approx(2.0));
  CHECK_FALSE(r.converge("stalled", "x", {10, 20}, {1e-2, 1e-2}, 1.0));
  VerificationReport f("demo");
  CHECK(f.converge("at floor", "x", {10, 20}, {1e-13, 2e-13}, 1.0));
  CHECK(f.convergence().back().at_floor);
  CHECK_FALSE(f.converge("above the floor", "x", {10, 20}, {1e-13, 2e-12}, 1.0));
  CHECK(f.converge("fd floor", "x", {10, 20}, {5e-10, 6e-10}, 1.0, kFdFloor));
  CHECK_THROWS_AS(f.converge("one point", "x", {10}, {1e-3}, 1.0), std::invalid_argument);
}

TEST_CASE("json layout") {
  VerificationReport r("demo", {{"seed", 3}});
  r.check("a", "anchor a", 0.5, 1.0, {{"R", 36}});
  r.converge("b", "anchor b", {1, 2}, {1.0, std::numeric_limits<double>::infinity()}, 1.0);
  r.note("n", 4);
  const Json j = r.to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"suite", "config", "passed", "checks", "convergence", "notes"});
  CHECK(j["checks"][0]["meta"]["R"] == 36);
  CHECK(j["convergence"][0]["points"][1][1] == "inf");
  CHECK(j["passed"] == false);
  CHECK(r.summary().find("demo: FAIL") != std::string::npos);
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 8);
  CHECK_THROWS_AS(run_suite("nope", {}), std::invalid_argument);
  RunConfig bad;
  bad.fd_step = -1.0;
  CHECK_THROWS_AS(run_suite("nerve", bad), std::invalid_argument);
  RunConfig grid;
  grid.grid = 10;
  CHECK_THROWS_AS(run_suite("loop", grid), std::invalid_argument);
  RunConfig alg;
  alg.algebra = "no-such-algebra";
  CHECK_THROWS(run_suite("nerve", alg));
}

TEST_CASE("reports are deterministic") {
  RunConfig cfg;
  cfg.fuzz = 200;
  cfg.samples = 5;
  cfg.seed = 42;
  const std::string a = run_suite("simplicial", cfg).to_json().dump();
  const std::string b = run_suite("simplicial", cfg).to_json().dump();
  CHECK(a == b);
  RunConfig n;
  n.samples = 5;
  n.seed = 9;
  const VerificationReport r1 = run_suite("nerve", n), r2 = run_suite("nerve", n);
  CHECK(r1.to_json().dump() == r2.to_json().dump());
  CHECK(r1.passed());
}

TEST_CASE("tolerance scale tightens every check") {
  RunConfig cfg;
  cfg.samples = 3;
  cfg.tol_scale = 1e-30;
  CHECK_FALSE(run_suite("nerve", cfg).passed());
}
