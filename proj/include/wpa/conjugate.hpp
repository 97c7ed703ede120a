#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wpa {

/// A scalar function on a grid 0 = t_0 < ... < t_m = T, linearly
/// interpolated between nodes and extended beyond T with a fixed slope.
///
/// The extrapolation slope bounds every argument a Young conjugate may be
/// evaluated at: for x above it the supremum would be attained outside the
/// grid, and young_conjugate() refuses rather than truncating silently.
class SampledFunction {
 public:
  /// Defaults the extrapolation slope to the last secant slope.
  SampledFunction(std::vector<double> grid, std::vector<double> values,
                  std::optional<double> extrapolation_slope = std::nullopt);

  static SampledFunction sample(const std::function<double(double)>& g, std::vector<double> grid,
                                std::optional<double> extrapolation_slope = std::nullopt);
  /// `count` uniform nodes on [0, upper].
  static SampledFunction sample(const std::function<double(double)>& g, double upper,
                                std::size_t count);

  /// Two-column "abscissa,value" CSV. Blank lines, '#' comments and a
  /// non-numeric header line are skipped. Errors name the line.
  static SampledFunction read_csv(std::istream& in);
  static SampledFunction load_csv(const std::string& path);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double upper() const noexcept { return grid_.back(); }
  double extrapolation_slope() const noexcept { return slope_; }

  /// Piecewise-linear interpolant; linear with the declared slope past T.
  double operator()(double t) const;

  /// Tail difference quotient (g(t_m) - g(t_{m/2})) / (t_m - t_{m/2}) exceeds
  /// `slope_floor`. Finite-grid stand-in for g(x)/x -> infinity.
  bool superlinear(double slope_floor) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  double slope_;
};

/// g*(x) = max over grid nodes of (x t_i - g(t_i)), x >= 0. A lower bound of
/// the true conjugate; exact for the piecewise-linear interpolant.
/// Throws DomainError when x exceeds the extrapolation slope.
double young_conjugate(const SampledFunction& g, double x);

/// Same values as the scalar overload for every x, computed in one pass over
/// the lower convex hull of the samples.
std::vector<double> young_conjugate(const SampledFunction& g, std::span<const double> xs);

/// g* sampled at the given nonnegative, increasing abscissae starting at 0.
SampledFunction conjugate_function(const SampledFunction& g, std::vector<double> slopes);

/// g[e](s) = g(e^s) on `count` uniform nodes of [0, span]. Requires the
/// source grid to cover [1, e^span]; throws DomainError otherwise.
SampledFunction exp_substitute(const SampledFunction& g, double span, std::size_t count);

/// x ln x - x for x > 0 and 0 at x = 0.
double lemma_bound(double x);

struct ConjugateGridOptions {
  /// Node spacing on the exponential variable s for both substitutions.
  double step = 1e-4;
  std::size_t max_nodes = 4'000'000;
};

/// The two conjugates (g[e])* and (g*[e])* of one sampled g.
///
/// g* is sampled exactly at u = e^{s_j} for the nodes s_j of g*[e], so the
/// second exponential substitution introduces no interpolation error. Both
/// conjugates are then lower bounds of the exact ones up to the grid error of
/// g* itself (of order g'' h^2 / 8 for source spacing h).
class ExpConjugatePair {
 public:
  explicit ExpConjugatePair(const SampledFunction& g, const ConjugateGridOptions& options = {});

  const SampledFunction& exp_substituted() const noexcept { return primal_; }
  const SampledFunction& conjugate() const noexcept { return conjugate_; }
  const SampledFunction& conjugate_exp_substituted() const noexcept { return dual_; }

  /// (g[e])*(x).
  double primal(double x) const { return young_conjugate(primal_, x); }
  /// (g*[e])*(x).
  double dual(double x) const { return young_conjugate(dual_, x); }
  /// Largest x both conjugates accept.
  double max_argument() const noexcept;
  /// lemma_bound(x) - primal(x) - dual(x); nonnegative in exact arithmetic.
  double gap(double x) const { return lemma_bound(x) - primal(x) - dual(x); }

 private:
  struct Parts;
  static Parts build(const SampledFunction& g, const ConjugateGridOptions& options);
  explicit ExpConjugatePair(Parts&& parts);

  SampledFunction primal_;
  SampledFunction conjugate_;
  SampledFunction dual_;
};

double lemma_gap(const SampledFunction& g, double x, const ConjugateGridOptions& options = {});

}  // namespace wpa
