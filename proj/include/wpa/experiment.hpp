#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wpa/certification.hpp"
#include "wpa/pipeline.hpp"
#include "wpa/weight.hpp"

namespace wpa {

/// Builds a weight from "family[:key=value,...]". Families: exp-power (a, p),
/// exp-anisotropic (a1..an, p1..pn), exp-linear (c), polynomial (k).
Weight parse_weight(const std::string& spec, std::size_t dim);

struct ExperimentConfig {
  std::size_t dim = 1;
  std::string weight = "exp-power:a=1,p=2";
  std::string target = "sin";
  std::vector<unsigned> nu_schedule{2, 4};
  std::vector<double> lambda_schedule{5.0, 20.0};
  unsigned n_min = 0;
  unsigned n_max = 24;
  unsigned n_step = 1;
  double tol = 1e-10;
  /// Exit status 0 requires the last row's measured error below this.
  double target_error = 1e-3;
  /// Half-side of the measurement cube; 0 means 4 nu.
  double radius = 0.0;
  /// Points per axis of the measurement grid; 0 means 201 (n = 1) or 101.
  std::size_t grid = 0;
  std::size_t directions = 64;
  std::string out;
  std::uint64_t seed = 1;

  /// Applies one "key = value" setting. Throws ConfigError.
  void set(const std::string& key, const std::string& value, std::size_t line = 0);
  /// Throws ConfigError unless schedules are non-empty and increasing and
  /// tolerances positive.
  void validate() const;
};

/// Flat key=value text: '#' starts a comment, blank lines are ignored.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

struct ConvergenceRow {
  unsigned nu = 0;
  double lambda = 0.0;
  unsigned degree = 0;
  double cutoff_error = 0.0;
  double mollify_error = 0.0;
  /// Weighted-norm estimate of f - V_N.
  double measured = 0.0;
  /// Weighted-norm estimate of f_{nu,lambda} - V_N.
  double measured_stage = 0.0;
  double sup_ratio = 0.0;
  double bound3 = 0.0;
  std::optional<double> bound4;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  bool membership_consistent = false;
  LimitReport limit;
  double final_measured = 0.0;
  bool target_reached = false;
};

/// One row per (nu, lambda, N). Writes metadata lines ("# key: value"), a
/// header and the rows to `csv`, 17 significant digits per float.
/// Numeric failures are rethrown as NumericError naming the stage.
ConvergenceResult run_convergence(const ExperimentConfig& config, std::ostream& csv);

std::string convergence_csv_header();
std::string convergence_csv_row(const ConvergenceRow& row);

struct LemmaSuiteConfig {
  std::size_t family_size = 50;
  std::uint64_t seed = 1;
  /// Samples of each g live on [0, upper] with this spacing.
  double upper = 10.0;
  double source_step = 2e-4;
  ConjugateGridOptions exp_grid{};
  double x_max = 20.0;
  std::size_t x_count = 41;
  /// Range on which the quadratic must meet the bound with equality.
  double equality_lo = 2.0;
};

struct LemmaMember {
  std::string description;
  double min_gap = 0.0;
  double argmin = 0.0;
};

struct LemmaSuiteReport {
  std::vector<LemmaMember> members;
  double min_gap = 0.0;
  /// max |gap| for g(y) = y^2 over [equality_lo, x_max].
  double quadratic_residual = 0.0;
};

/// Randomized convex superlinear family (quadratics, powers, exponentials,
/// piecewise-linear convex hulls, each with a random offset).
/// Throws InputError for an empty family.
LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config);

}  // namespace wpa
