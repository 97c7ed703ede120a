#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "wpa/kernel.hpp"
#include "wpa/multipoly.hpp"
#include "wpa/weight.hpp"

namespace wpa {

/// chi(t) = s(2-|t|) / (s(2-|t|) + s(|t|-1)) with s(u) = exp(-1/u) for u > 0
/// and 0 otherwise. C-infinity, equal to 1 on [-1, 1], 0 outside (-2, 2).
class CutoffFunction {
 public:
  double operator()(double t) const noexcept;
};

CutoffFunction smooth_cutoff() noexcept;

/// f_nu(x) = f(x) * prod_j chi(x_j / nu). Equals f on the cube of half-side
/// nu and vanishes outside the cube of half-side 2 nu.
class CutoffStage {
 public:
  CutoffStage(TargetFunction source, unsigned nu);

  std::size_t dim() const noexcept { return source_.dim(); }
  unsigned nu() const noexcept { return nu_; }
  const TargetFunction& source() const noexcept { return source_; }

  double operator()(PointView x) const;

  /// Per-axis points where f_nu stops being analytic: -2nu, -nu, nu, 2nu.
  std::array<double, 4> seams() const noexcept;

 private:
  TargetFunction source_;
  unsigned nu_;
};

CutoffStage cutoff_apply(const TargetFunction& f, unsigned nu);

/// Grid estimate of sup over [-R,R]^n minus the open cube of half-side nu of
/// |f| / Phi, which bounds p(f_nu - f). Each slab {nu <= |x_j| <= R} is
/// sampled separately with its boundary included.
double cutoff_error(const TargetFunction& f, const Weight& w, unsigned nu, double radius,
                    std::size_t m);

/// Tensor Gauss-Legendre settings for integrals over the support of f_nu.
struct QuadratureOptions {
  /// Successive refinements must agree to within this (scaled, see moments()).
  double tol = 1e-10;
  /// Gauss-Legendre points per subpanel.
  std::size_t order = 10;
  std::size_t max_nodes_per_axis = std::size_t{1} << 18;
};

/// f_{nu,lambda} = (lambda^n / A) int f_nu(y) H(lambda (x - y)) dy at every
/// point of `grid`. The integral runs over the exact support of f_nu with
/// panels split at the seams and about lambda/pi subpanels per unit length,
/// doubled until two passes differ by less than opts.tol everywhere.
/// Throws NumericError with the achieved difference if the node budget runs out.
std::vector<double> mollify_on_grid(const CutoffStage& stage, double lambda,
                                    const TensorGrid& grid, const QuadratureOptions& opts = {});

double mollify(const CutoffStage& stage, double lambda, PointView x,
               const QuadratureOptions& opts = {});

/// f_{nu,lambda} as an evaluable object.
class MollifiedStage {
 public:
  MollifiedStage(CutoffStage base, double lambda, QuadratureOptions opts = {});

  const CutoffStage& base() const noexcept { return base_; }
  double lambda() const noexcept { return lambda_; }
  const QuadratureOptions& quadrature() const noexcept { return opts_; }

  double operator()(PointView x) const { return mollify(base_, lambda_, x, opts_); }
  std::vector<double> on_grid(const TensorGrid& grid) const {
    return mollify_on_grid(base_, lambda_, grid, opts_);
  }

 private:
  CutoffStage base_;
  double lambda_;
  QuadratureOptions opts_;
};

/// Two-term estimate of |f_{nu,lambda}(x) - f_nu(x)|: the near term measures
/// the oscillation of f_nu on the ball of radius r = lambda^{-2n/(2n+1)}
/// around x; the tail term is (2 M_nu / A) times the kernel mass outside
/// radius lambda r = lambda^{1/(2n+1)}, where M_nu = max |f| on the cube of
/// half-side 2 nu.
struct ErrorSplit {
  double near_term = 0.0;
  double tail_term = 0.0;
  double near_radius = 0.0;
  double tail_radius = 0.0;
};

ErrorSplit mollify_error_split(const CutoffStage& stage, double lambda, PointView x);

/// int f_nu(y) y^beta dy for every |beta| <= max_degree.
///
/// Convergence is judged per moment against tol * max(1, int |f_nu| |y^beta|),
/// since high-order moments of sign-changing f_nu cancel far below the size
/// of their integrand.
std::map<MultiIndex, double> moments(const CutoffStage& stage, unsigned max_degree,
                                     const QuadratureOptions& opts = {});

double moment(const CutoffStage& stage, const MultiIndex& beta, const QuadratureOptions& opts = {});

/// int |f_nu|.
double l1_norm(const CutoffStage& stage, const QuadratureOptions& opts = {});

struct ApproxParams {
  unsigned nu = 1;
  double lambda = 2.0;
  unsigned degree = 0;

  /// Throws InputError unless nu >= 1 and lambda > 1.
  void validate() const;
};

/// V_N(x) = (lambda^n / A) int f_nu(y) U_N(lambda (x - y)) dy as an explicit
/// polynomial: every kernel term a_g lambda^|g| prod (x_i - y_i)^{g_i} is
/// expanded binomially and the y-integrals become moments of f_nu.
/// Coefficients are accumulated with compensated summation.
MultiPoly build_approximant(const CutoffStage& stage, double lambda, unsigned degree,
                            const QuadratureOptions& opts = {});

/// Same, reusing a moment table covering every |beta| <= degree.
MultiPoly build_approximant(const CutoffStage& stage, double lambda, unsigned degree,
                            const std::map<MultiIndex, double>& moment_table);

/// Constants C1, C2 with |f_{nu,lambda} - V_N|(x) <= C1 C2^N (1+|x|)^{N+1} / (N+1)!:
/// C2 = n lambda (1 + 4 nu sqrt(n)), C1 = (lambda^n / A) |f_nu|_1 2 K_H C2.
struct TransferConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double l1_norm = 0.0;
};

TransferConstants transfer_constants(const CutoffStage& stage, double lambda,
                                     const QuadratureOptions& opts = {});

/// (lambda^n / A) |f_nu|_1 sup_y R_N(lambda (x - y)) with R_N the Taylor
/// remainder bound and y over the cube of half-side 2 nu. Pointwise bound on
/// |f_{nu,lambda}(x) - V_N(x)|.
double transfer_bound(const CutoffStage& stage, double lambda, unsigned degree, PointView x,
                      double l1_norm);

}  // namespace wpa
