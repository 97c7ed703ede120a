#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wpa/grid.hpp"

namespace wpa {

/// An admissible weight Phi: R^n -> [1, inf), stored through its logarithm
/// phi = ln Phi so that superexponential weights never overflow.
///
/// Lower semicontinuity is assumed and never checked. Membership in the
/// superexponential class can only be probed heuristically, see
/// membership_check().
class Weight {
 public:
  using LogEvaluator = std::function<double(PointView)>;

  Weight(std::size_t dim, LogEvaluator log_weight, std::string family, bool radial = false);

  /// Phi = exp(a |x|^p), a > 0, p > 1.
  static Weight exp_power(std::size_t dim, double a, double p);
  /// Phi = exp(sum_i a_i |x_i|^{p_i}), a_i > 0, p_i > 1.
  static Weight exp_anisotropic(std::vector<double> a, std::vector<double> p);
  /// Phi = exp(c |x|), c > 0. Grows only exponentially: not admissible.
  static Weight exp_linear(std::size_t dim, double c);
  /// Phi = (1 + |x|^2)^k, k > 0. Polynomial growth: not admissible.
  static Weight polynomial(std::size_t dim, double k);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& family() const noexcept { return family_; }
  /// True when phi depends on |x| only; one direction then represents all.
  bool radial() const noexcept { return radial_; }

  /// phi(x) = ln Phi(x). Throws InputError on dimension mismatch.
  double log_value(PointView x) const;

 private:
  std::size_t dim_;
  LogEvaluator log_weight_;
  std::string family_;
  bool radial_;
};

/// t -> phi(t * sigma) for a unit direction sigma.
class RadialSection {
 public:
  RadialSection(Weight weight, Point direction);

  const Point& direction() const noexcept { return direction_; }
  double operator()(double t) const;

 private:
  Weight weight_;
  Point direction_;
};

/// Throws InputError unless |sigma| = 1 within 1e-12.
RadialSection radial_section(const Weight& w, Point direction);

/// Deterministic sample of the unit sphere used for the inf/sup over
/// directions: one direction for radial weights, {+1, -1} for n = 1, `count`
/// equally spaced angles for n = 2, signed axes and cube diagonals otherwise.
std::vector<Point> sample_directions(const Weight& w, std::size_t count = 64);

/// A continuous target f in C_Phi. o(Phi) decay is not enforced.
class TargetFunction {
 public:
  using Evaluator = std::function<double(PointView)>;

  TargetFunction(std::size_t dim, Evaluator eval, std::string name = "custom",
                 std::optional<double> decay_hint = std::nullopt);

  /// Built-in targets: "zero", "one", "sin" (sin x1), "sin-cos"
  /// (sin x1 cos x2, n >= 2), "exp" (exp x1), "gauss" (exp(-|x|^2)).
  static TargetFunction named(const std::string& name, std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  std::optional<double> decay_hint() const noexcept { return decay_hint_; }

  double operator()(PointView x) const;

 private:
  std::size_t dim_;
  Evaluator eval_;
  std::string name_;
  std::optional<double> decay_hint_;
};

/// max over `grid` of |values[k]| * exp(-phi(node_k)), reduced in grid order.
/// Throws EvaluationError naming the node when a value or phi is not finite.
double weighted_sup(const TensorGrid& grid, std::span<const double> values, const Weight& w);

/// Lower estimate of p(f) = sup |f| / Phi: the sup over the uniform tensor grid
/// with m points per axis on [-R, R]^n.
double weighted_norm_estimate(const TargetFunction& f, const Weight& w, double radius,
                              std::size_t m);

/// Default per-axis resolution: 201 points for n = 1, 101 otherwise.
std::size_t default_grid_points(std::size_t dim) noexcept;

struct MembershipReport {
  std::vector<double> radii;
  std::vector<Point> directions;
  /// ratios[d][k] = phi(radii[k] * directions[d]) / radii[k].
  std::vector<std::vector<double>> ratios;
  /// Ratios strictly increasing along every sampled direction. A necessary
  /// condition probe for phi(x)/|x| -> infinity, not a proof.
  bool consistent = false;
};

MembershipReport membership_check(const Weight& w, std::span<const double> radii,
                                  const std::vector<Point>& directions);

/// Largest difference quotient between grid neighbours of f on [-R, R]^n.
double lipschitz_estimate(const TargetFunction& f, double radius, std::size_t m);

}  // namespace wpa
