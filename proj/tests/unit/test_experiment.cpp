#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wpa/errors.hpp"
#include "wpa/experiment.hpp"

using namespace wpa;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.nu_schedule = {1, 2};
  c.lambda_schedule = {3.0};
  c.n_max = 6;
  c.directions = 8;
  return c;
}

std::size_t count_rows(const std::string& csv) {
  std::size_t rows = 0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("nu,", 0) != 0) ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("weight specs") {
  CHECK(parse_weight("exp-power", 1).family() == parse_weight("exp-power:a=1,p=2", 1).family());
  const double x[2] = {1.0, 2.0};
  CHECK(parse_weight("exp-anisotropic:a1=1,a2=2,p1=2,p2=3", 2).log_value(x) == doctest::Approx(17.0));
  CHECK(parse_weight("exp-linear:c=2", 2).log_value(x) == doctest::Approx(2.0 * std::sqrt(5.0)));
  const double one[1] = {1.0};
  CHECK(parse_weight("polynomial:k=1", 1).log_value(one) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(parse_weight("gaussian", 1), InputError);
  CHECK_THROWS_AS(parse_weight("exp-power:a", 1), InputError);
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# demo\n"
      "weight = exp-power:a=1,p=2\n"
      "nu_schedule = 1, 3\n"
      "lambda-schedule = 4 8\n"
      "\n"
      "n-max = 5   # inline comment\n"
      "tol = 1e-9\n");
  const ExperimentConfig c = parse_config(in);
  CHECK(c.nu_schedule == std::vector<unsigned>{1, 3});
  CHECK(c.lambda_schedule == std::vector<double>{4.0, 8.0});
  CHECK(c.n_max == 5);
  CHECK(c.tol == 1e-9);
  CHECK(c.target == "sin");
}

TEST_CASE("config errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_config(in);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("dim = 1\nbogus = 2\n") == 2);
  CHECK(line_of("\n\nn-max = ten\n") == 3);
  CHECK(line_of("weight exp-power\n") == 1);
  CHECK(line_of("tol = 1e-9x\n") == 1);
  std::istringstream in("dim = 1\nfoo = 2\n");
  try {
    parse_config(in);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent.cfg"), ConfigError);
}

TEST_CASE("config validation") {
  auto invalid = [](auto&& mutate) {
    ExperimentConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  invalid([](ExperimentConfig& c) { c.nu_schedule = {}; });
  invalid([](ExperimentConfig& c) { c.nu_schedule = {2, 2}; });
  invalid([](ExperimentConfig& c) { c.lambda_schedule = {5.0, 4.0}; });
  invalid([](ExperimentConfig& c) { c.lambda_schedule = {1.0}; });
  invalid([](ExperimentConfig& c) { c.tol = 0.0; });
  invalid([](ExperimentConfig& c) { c.target_error = -1.0; });
  invalid([](ExperimentConfig& c) { c.n_min = 5, c.n_max = 3; });
  CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("zero target: every row emitted, every error zero") {
  ExperimentConfig c = small_config();
  c.target = "zero";
  std::ostringstream out;
  const ConvergenceResult r = run_convergence(c, out);
  CHECK(r.rows.size() == 2 * 1 * 7);
  CHECK(count_rows(out.str()) == r.rows.size());
  for (const auto& row : r.rows) {
    CHECK(row.measured == 0.0);
    CHECK(row.cutoff_error == 0.0);
    CHECK(row.mollify_error == 0.0);
  }
  CHECK(r.target_reached);
}

TEST_CASE("output is byte-stable and carries metadata") {
  const ExperimentConfig c = small_config();
  std::ostringstream a;
  std::ostringstream b;
  run_convergence(c, a);
  run_convergence(c, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("# limit: admissible-consistent") != std::string::npos);
  CHECK(a.str().find("\n" + convergence_csv_header() + "\n") != std::string::npos);
}

TEST_CASE("non-admissible weight is flagged but the pipeline runs") {
  ExperimentConfig c = small_config();
  c.weight = "exp-linear:c=1";
  std::ostringstream out;
  const ConvergenceResult r = run_convergence(c, out);
  CHECK_FALSE(r.membership_consistent);
  CHECK_FALSE(r.limit.consistent);
  CHECK(out.str().find("non-admissible") != std::string::npos);
  CHECK(r.rows.size() == 14);
  for (const auto& row : r.rows) CHECK_FALSE(row.bound4);
}

TEST_CASE("numeric failures name the stage") {
  ExperimentConfig c = small_config();
  c.weight = "polynomial:k=1";
  std::ostringstream out;
  try {
    run_convergence(c, out);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).rfind("certification:", 0) == 0);
  }
  ExperimentConfig t = small_config();
  t.tol = 1e-40;
  try {
    run_convergence(t, out);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).rfind("mollification:", 0) == 0);
  }
  ExperimentConfig bad = small_config();
  bad.target = "unknown";
  CHECK_THROWS_AS(run_convergence(bad, out), ConfigError);
}

TEST_CASE("lemma suite") {
  LemmaSuiteConfig c;
  const LemmaSuiteReport r = run_lemma_suite(c);
  CHECK(r.members.size() == 50);
  CHECK(r.min_gap >= -1e-6);
  CHECK(r.quadratic_residual <= 1e-6);
  c.family_size = 0;
  CHECK_THROWS_AS(run_lemma_suite(c), InputError);
}
