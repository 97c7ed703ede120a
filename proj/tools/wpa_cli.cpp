// wpa: batch driver for the weighted polynomial approximation pipeline.
//
//   wpa convergence [--config FILE] [--weight SPEC] [--target NAME] ...
//   wpa lemma [--seed S] [--family-size K]
//
// Exit status: 0 success, 1 target not reached, 2 config error, 3 numeric error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wpa/errors.hpp"
#include "wpa/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kTargetMissed = 1;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Overrides {
  std::string config;
  std::optional<std::string> weight;
  std::optional<std::string> target;
  std::optional<std::string> nu_schedule;
  std::optional<std::string> lambda_schedule;
  std::optional<std::string> n_max;
  std::optional<std::string> tol;
  std::optional<std::string> out;
  std::optional<std::string> seed;
  std::optional<std::string> dim;
  std::optional<std::string> target_error;
};

wpa::ExperimentConfig build_config(const Overrides& o) {
  wpa::ExperimentConfig config;
  if (!o.config.empty()) config = wpa::load_config(o.config);
  auto apply = [&](const char* key, const std::optional<std::string>& v) {
    if (v) config.set(key, *v);
  };
  apply("dim", o.dim);
  apply("weight", o.weight);
  apply("target", o.target);
  apply("nu-schedule", o.nu_schedule);
  apply("lambda-schedule", o.lambda_schedule);
  apply("n-max", o.n_max);
  apply("tol", o.tol);
  apply("target-error", o.target_error);
  apply("out", o.out);
  apply("seed", o.seed);
  config.validate();
  return config;
}

int run_convergence(const Overrides& o) {
  wpa::ExperimentConfig config;
  try {
    config = build_config(o);
  } catch (const wpa::InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  std::ofstream file;
  if (!config.out.empty()) {
    file.open(config.out);
    if (!file) {
      std::cerr << "config error: cannot write " << config.out << '\n';
      return kConfigError;
    }
  }
  std::ostream& csv = config.out.empty() ? std::cout : file;
  try {
    const wpa::ConvergenceResult r = wpa::run_convergence(config, csv);
    std::cerr << "final measured error " << wpa::format_real(r.final_measured) << " (target "
              << wpa::format_real(config.target_error) << ")\n";
    if (!r.limit.consistent) std::cerr << "weight flagged non-admissible\n";
    return r.target_reached ? kOk : kTargetMissed;
  } catch (const wpa::InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const wpa::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}

int run_lemma(const wpa::LemmaSuiteConfig& config, double threshold) {
  try {
    const wpa::LemmaSuiteReport r = wpa::run_lemma_suite(config);
    std::cout << "member,min_gap,argmin\n";
    for (const auto& m : r.members) {
      std::cout << '"' << m.description << "\"," << wpa::format_real(m.min_gap) << ','
                << wpa::format_real(m.argmin) << '\n';
    }
    std::cout << "# min gap: " << wpa::format_real(r.min_gap) << '\n'
              << "# quadratic residual: " << wpa::format_real(r.quadratic_residual) << '\n';
    return r.min_gap >= -threshold && r.quadratic_residual <= threshold ? kOk : kTargetMissed;
  } catch (const wpa::InputError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const wpa::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted polynomial approximation driver"};
  app.require_subcommand(1);

  Overrides o;
  auto* conv = app.add_subcommand("convergence", "Run the convergence table");
  conv->add_option("--config", o.config, "key=value config file")->check(CLI::ExistingFile);
  conv->add_option("--weight", o.weight, "weight spec, e.g. exp-power:a=1,p=2");
  conv->add_option("--target", o.target, "target function name");
  conv->add_option("--nu-schedule", o.nu_schedule, "comma-separated cutoff scales");
  conv->add_option("--lambda-schedule", o.lambda_schedule, "comma-separated kernel scales");
  conv->add_option("--n-max", o.n_max, "largest polynomial degree");
  conv->add_option("--tol", o.tol, "quadrature tolerance");
  conv->add_option("--out", o.out, "CSV output path (default stdout)");
  conv->add_option("--seed", o.seed, "seed");
  conv->add_option("--dim", o.dim, "dimension");
  conv->add_option("--target-error", o.target_error, "error required for exit status 0");

  wpa::LemmaSuiteConfig lemma;
  double threshold = 1e-6;
  auto* lem = app.add_subcommand("lemma", "Run the randomized conjugate inequality suite");
  lem->add_option("--seed", lemma.seed, "seed");
  lem->add_option("--family-size", lemma.family_size, "number of random convex functions");
  lem->add_option("--step", lemma.source_step, "sample spacing on [0, 10]");
  lem->add_option("--threshold", threshold, "tolerated negative gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (*conv) return run_convergence(o);
  return run_lemma(lemma, threshold);
}
