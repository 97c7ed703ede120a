#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wpa/conjugate.hpp"
#include "wpa/pipeline.hpp"
#include "wpa/weight.hpp"

namespace wpa {

/// log of sup_x (1+|x|)^{N+1} / Phi(x): per direction a coarse radial grid
/// followed by golden-section refinement of (N+1) ln(1+r) - phi_sigma(r).
/// Throws DivergingRatioError when no interior maximum appears before the
/// radial search guard (1e8).
double log_sup_ratio(const Weight& w, unsigned degree, const std::vector<Point>& directions);
double sup_ratio(const Weight& w, unsigned degree, const std::vector<Point>& directions);
double sup_ratio(const Weight& w, unsigned degree);

struct RadialConjugateOptions {
  /// Spacing of the sampled phi_sigma on [0, T].
  double step = 1e-4;
  std::size_t max_source_nodes = 2'000'000;
  double initial_radius = 4.0;
  double max_radius = 1e4;
  ConjugateGridOptions exp_grid{};
};

/// Per-direction conjugates of the radial sections of a weight:
/// (phi_sigma[e])* and ((phi_sigma)*[e])*, on grids wide enough for every
/// argument up to `max_argument`. The sampled radius T doubles until both
/// slope guards admit max_argument. If the second conjugate cannot reach it
/// (phi grows linearly, so phi* is infinite past the growth rate), only the
/// first is kept and dual_failure() says why.
class RadialConjugateTable {
 public:
  RadialConjugateTable(const Weight& w, std::vector<Point> directions, double max_argument,
                       const RadialConjugateOptions& options = {});

  const std::vector<Point>& directions() const noexcept { return directions_; }
  double max_argument() const noexcept { return max_argument_; }

  /// max over sampled sigma of (phi_sigma[e])*(xi).
  double max_primal(double xi) const;
  /// min over sampled sigma of ((phi_sigma)*[e])*(xi). Throws DomainError
  /// when the dual conjugates are unavailable.
  double min_dual(double xi) const;
  /// Per-direction values of ((phi_sigma)*[e])*(xi).
  std::vector<double> dual_values(double xi) const;

  bool dual_available() const noexcept { return !dual_failure_.has_value(); }
  const std::optional<std::string>& dual_failure() const noexcept { return dual_failure_; }

 private:
  std::vector<Point> directions_;
  double max_argument_;
  std::vector<SampledFunction> primal_;
  std::vector<SampledFunction> dual_;
  std::optional<std::string> dual_failure_;
};

/// log of 2^{N+1} exp(max(0, max_sigma (phi_sigma[e])*(N+1))), the
/// conjugate-form majorant of the sup ratio.
double log_conjugate_form_bound(const RadialConjugateTable& table, unsigned degree);
double conjugate_form_bound(const Weight& w, unsigned degree, const std::vector<Point>& directions);

/// log of 2^{N+1} max(1, (N+1)^{N+1} e^{-(N+1)} e^{-min_sigma ((phi_sigma)*[e])*(N+1)}),
/// the majorant obtained from the previous one through the conjugate lemma.
double log_lemma_form_bound(const RadialConjugateTable& table, unsigned degree);

struct BoundConstants {
  double c1 = 1.0;
  double c2 = 1.0;
};

/// log of C1 C2^N / (N+1)! * sup_ratio.
double log_remainder_bound(const BoundConstants& c, double log_sup_ratio_value, unsigned degree);
double remainder_bound(const BoundConstants& c, const Weight& w, unsigned degree,
                       const std::vector<Point>& directions);

/// log of 2 C1 max((2C2)^N / (N+1)!, (2C2)^N e^{-min_sigma ((phi_sigma)*[e])*(N+1)}).
double log_conjugate_remainder_bound(const BoundConstants& c, const RadialConjugateTable& table,
                                     unsigned degree);
double conjugate_remainder_bound(const BoundConstants& c, const Weight& w, unsigned degree,
                                 const std::vector<Point>& directions);

/// Every link of the chain from the remainder bound to its conjugate form,
/// in log space. In exact arithmetic
///   remainder <= remainder_conjugate <= remainder_lemma <= conjugate_remainder.
struct BoundChain {
  unsigned degree = 0;
  double log_sup_ratio = 0.0;
  double log_conjugate_form = 0.0;
  std::optional<double> log_lemma_form;
  double log_remainder = 0.0;
  double log_remainder_conjugate = 0.0;
  std::optional<double> log_remainder_lemma;
  std::optional<double> log_conjugate_remainder;
};

BoundChain bound_chain(const BoundConstants& c, const Weight& w, const RadialConjugateTable& table,
                       unsigned degree);

struct LimitReport {
  std::vector<double> arguments;
  /// min over sigma of ((phi_sigma)*[e])*(xi) / xi for each xi.
  std::vector<double> min_ratios;
  /// Ratios strictly increasing along the arguments.
  bool consistent = false;
  /// Set when the conjugates could not be formed (slope guard tripped).
  std::optional<std::string> failure;
};

/// Probe of min_sigma ((phi_sigma)*[e])*(xi) / xi -> infinity. Never throws
/// for a slope-guard failure; the report is flagged instead.
LimitReport limit_diagnostic(const Weight& w, const std::vector<Point>& directions,
                             const std::vector<double>& arguments,
                             const RadialConjugateOptions& options = {});

struct ErrorCertificate {
  ApproxParams params;
  /// Weighted-norm estimate of f_{nu,lambda} - V_N.
  double measured = 0.0;
  double sup_ratio = 0.0;
  double bound3 = 0.0;
  /// Absent when the weight's dual conjugates do not exist.
  std::optional<double> bound4;
  bool limit_consistent = false;
};

/// "nu,lambda,N,measured,sup_ratio,bound3,bound4,limit_flag".
std::string certificate_csv_header();
std::string certificate_csv_row(const ErrorCertificate& c);

/// printf("%.17g") for finite values, "nan"/"inf" otherwise.
std::string format_real(double v);

}  // namespace wpa
