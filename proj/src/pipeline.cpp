#include "wpa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wpa/errors.hpp"
#include "wpa/quadrature.hpp"

namespace wpa {

namespace {

double bump(double u) noexcept { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double normalization_1d() {
  static const double value = kernel_constants(1).normalization_1d;
  return value;
}

// Composite rule over [-2nu, 2nu] split at the seams, with `density`
// subpanels per unit length (at least one per panel), times 2^level.
QuadratureRule axis_rule(const CutoffStage& stage, double density, unsigned level,
                         std::size_t order) {
  const auto s = stage.seams();
  std::array<std::size_t, 3> pieces{};
  for (std::size_t p = 0; p < 3; ++p) {
    const double len = s[p + 1] - s[p];
    pieces[p] = static_cast<std::size_t>(std::max(1.0, std::ceil(density * len))) << level;
  }
  return composite_gauss_legendre(s, pieces, order);
}

// f_nu at every tensor node times the product of weights (row-major).
std::vector<double> weighted_samples(const CutoffStage& stage, const QuadratureRule& rule) {
  const TensorGrid nodes = TensorGrid::cube(stage.dim(), rule.nodes);
  const TensorGrid weights = TensorGrid::cube(stage.dim(), rule.weights);
  std::vector<double> out(nodes.size());
  Point w(stage.dim());
  nodes.for_each([&](std::size_t k, PointView y) {
    weights.point(k, w);
    double prod = 1.0;
    for (double wi : w) prod *= wi;
    out[k] = prod == 0.0 ? 0.0 : stage(y) * prod;
  });
  return out;
}

// Contracts axis `axis` of the row-major tensor `t` (shape `dims`) with the
// rows x dims[axis] matrix `k`. dims[axis] becomes `rows`.
std::vector<double> mode_product(const std::vector<double>& t, std::vector<std::size_t>& dims,
                                 std::size_t axis, const std::vector<double>& k,
                                 std::size_t rows) {
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= dims[i];
  for (std::size_t i = axis + 1; i < dims.size(); ++i) inner *= dims[i];
  const std::size_t mid = dims[axis];
  std::vector<double> out(outer * rows * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t p = 0; p < rows; ++p) {
      double* dst = &out[(o * rows + p) * inner];
      for (std::size_t m = 0; m < mid; ++m) {
        const double c = k[p * mid + m];
        if (c == 0.0) continue;
        const double* src = &t[(o * mid + m) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += c * src[i];
      }
    }
  }
  dims[axis] = rows;
  return out;
}

std::string budget_message(const char* what, double achieved) {
  std::ostringstream os;
  os << what << ": node budget exhausted, achieved difference " << achieved;
  return os.str();
}

void check_lambda(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw InputError("lambda must exceed 1");
}

struct MomentPass {
  std::vector<double> values;
  std::vector<double> scales;
};

// All moments with beta_i <= max_degree as a (max_degree+1)^n tensor, along
// with the matching moments of |f_nu| |y^beta|.
MomentPass moment_pass(const CutoffStage& stage, unsigned max_degree, const QuadratureRule& rule) {
  const std::size_t q = rule.size();
  const std::size_t d = max_degree + 1;
  std::vector<double> f = weighted_samples(stage, rule);
  std::vector<double> f_abs(f.size());
  std::transform(f.begin(), f.end(), f_abs.begin(), [](double v) { return std::abs(v); });
  std::vector<double> powers(d * q);
  std::vector<double> abs_powers(d * q);
  for (std::size_t m = 0; m < q; ++m) {
    double p = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      powers[j * q + m] = p;
      abs_powers[j * q + m] = std::abs(p);
      p *= rule.nodes[m];
    }
  }
  std::vector<std::size_t> dims(stage.dim(), q);
  std::vector<std::size_t> abs_dims = dims;
  for (std::size_t axis = 0; axis < stage.dim(); ++axis) {
    f = mode_product(f, dims, axis, powers, d);
    f_abs = mode_product(f_abs, abs_dims, axis, abs_powers, d);
  }
  return {std::move(f), std::move(f_abs)};
}

}  // namespace

double CutoffFunction::operator()(double t) const noexcept {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double inner = bump(2.0 - a);
  const double outer = bump(a - 1.0);
  return inner / (inner + outer);
}

CutoffFunction smooth_cutoff() noexcept { return {}; }

CutoffStage::CutoffStage(TargetFunction source, unsigned nu) : source_(std::move(source)), nu_(nu) {
  if (nu_ == 0) throw InputError("cutoff: nu must be a positive integer");
}

double CutoffStage::operator()(PointView x) const {
  const CutoffFunction chi;
  const double scale = 1.0 / static_cast<double>(nu_);
  double eta = 1.0;
  for (double xi : x) {
    eta *= chi(xi * scale);
    if (eta == 0.0) return 0.0;
  }
  return source_(x) * eta;
}

std::array<double, 4> CutoffStage::seams() const noexcept {
  const auto nu = static_cast<double>(nu_);
  return {-2.0 * nu, -nu, nu, 2.0 * nu};
}

CutoffStage cutoff_apply(const TargetFunction& f, unsigned nu) { return CutoffStage(f, nu); }

double cutoff_error(const TargetFunction& f, const Weight& w, unsigned nu, double radius,
                    std::size_t m) {
  const auto nu_d = static_cast<double>(nu);
  if (!(radius > nu_d)) throw InputError("cutoff_error: radius must exceed nu");
  if (m < 2) throw InputError("cutoff_error: need at least 2 points per axis");
  const std::vector<double> full = uniform_nodes(-radius, radius, m);
  const std::vector<double> half = uniform_nodes(nu_d, radius, std::max<std::size_t>(2, (m + 1) / 2));
  std::vector<double> outside;
  for (auto it = half.rbegin(); it != half.rend(); ++it) outside.push_back(-*it);
  outside.insert(outside.end(), half.begin(), half.end());

  double best = 0.0;
  for (std::size_t slab = 0; slab < f.dim(); ++slab) {
    std::vector<std::vector<double>> axes(f.dim(), full);
    axes[slab] = outside;
    const TensorGrid grid(std::move(axes));
    std::vector<double> values(grid.size());
    grid.for_each([&](std::size_t k, PointView x) { values[k] = f(x); });
    best = std::max(best, weighted_sup(grid, values, w));
  }
  return best;
}

std::vector<double> mollify_on_grid(const CutoffStage& stage, double lambda,
                                    const TensorGrid& grid, const QuadratureOptions& opts) {
  check_lambda(lambda);
  if (grid.dim() != stage.dim()) throw InputError("mollify: dimension mismatch");
  const double scale = lambda / normalization_1d();
  const double density = std::max(1.0, lambda / std::numbers::pi);
  std::vector<double> previous;
  double achieved = std::numeric_limits<double>::infinity();
  for (unsigned level = 0;; ++level) {
    const QuadratureRule rule = axis_rule(stage, density, level, opts.order);
    if (rule.size() > opts.max_nodes_per_axis) {
      throw NumericError(budget_message("mollify", achieved), achieved);
    }
    std::vector<double> t = weighted_samples(stage, rule);
    std::vector<std::size_t> dims(stage.dim(), rule.size());
    for (std::size_t axis = 0; axis < stage.dim(); ++axis) {
      const auto& xs = grid.axis(axis);
      std::vector<double> k(xs.size() * rule.size());
      for (std::size_t p = 0; p < xs.size(); ++p) {
        for (std::size_t m = 0; m < rule.size(); ++m) {
          k[p * rule.size() + m] = scale * kernel_1d(lambda * (xs[p] - rule.nodes[m]));
        }
      }
      t = mode_product(t, dims, axis, k, xs.size());
    }
    if (!previous.empty()) {
      achieved = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        achieved = std::max(achieved, std::abs(t[i] - previous[i]));
      }
      if (achieved < opts.tol) return t;
    }
    previous = std::move(t);
  }
}

double mollify(const CutoffStage& stage, double lambda, PointView x,
               const QuadratureOptions& opts) {
  std::vector<std::vector<double>> axes;
  for (double xi : x) axes.push_back({xi});
  return mollify_on_grid(stage, lambda, TensorGrid(std::move(axes)), opts).front();
}

MollifiedStage::MollifiedStage(CutoffStage base, double lambda, QuadratureOptions opts)
    : base_(std::move(base)), lambda_(lambda), opts_(opts) {
  check_lambda(lambda_);
}

ErrorSplit mollify_error_split(const CutoffStage& stage, double lambda, PointView x) {
  check_lambda(lambda);
  const std::size_t n = stage.dim();
  if (x.size() != n) throw InputError("mollify_error_split: dimension mismatch");
  const double dn = static_cast<double>(n);
  ErrorSplit split;
  split.near_radius = std::pow(lambda, -2.0 * dn / (2.0 * dn + 1.0));
  split.tail_radius = std::pow(lambda, 1.0 / (2.0 * dn + 1.0));

  // Oscillation of f_nu over the ball around x.
  const std::size_t per_axis = n <= 2 ? 41 : 9;
  const double center = stage(x);
  std::vector<std::vector<double>> axes;
  for (double xi : x) {
    axes.push_back(uniform_nodes(xi - split.near_radius, xi + split.near_radius, per_axis));
  }
  const TensorGrid ball(std::move(axes));
  Point offset(n);
  ball.for_each([&](std::size_t, PointView y) {
    for (std::size_t i = 0; i < n; ++i) offset[i] = y[i] - x[i];
    if (euclidean_norm(offset) > split.near_radius) return;
    split.near_term = std::max(split.near_term, std::abs(stage(y) - center));
  });

  // M_nu on the cube of half-side 2 nu.
  const double half = 2.0 * static_cast<double>(stage.nu());
  const TensorGrid box = TensorGrid::cube(n, uniform_nodes(-half, half, default_grid_points(n)));
  double m_nu = 0.0;
  box.for_each([&](std::size_t, PointView y) { m_nu = std::max(m_nu, std::abs(stage.source()(y))); });
  const double a = std::pow(normalization_1d(), dn);
  split.tail_term = 2.0 * m_nu / a * kernel_tail_mass(n, split.tail_radius);
  return split;
}

std::map<MultiIndex, double> moments(const CutoffStage& stage, unsigned max_degree,
                                     const QuadratureOptions& opts) {
  const std::size_t n = stage.dim();
  const std::size_t d = max_degree + 1;
  MomentPass previous;
  double achieved = std::numeric_limits<double>::infinity();
  for (unsigned level = 0;; ++level) {
    const QuadratureRule rule = axis_rule(stage, 1.0, level, opts.order);
    if (rule.size() > opts.max_nodes_per_axis) {
      throw NumericError(budget_message("moments", achieved), achieved);
    }
    MomentPass pass = moment_pass(stage, max_degree, rule);
    if (!previous.values.empty()) {
      bool converged = true;
      achieved = 0.0;
      for (std::size_t i = 0; i < pass.values.size(); ++i) {
        const double rel = std::abs(pass.values[i] - previous.values[i]) /
                           std::max(1.0, pass.scales[i]);
        achieved = std::max(achieved, rel);
        if (rel >= opts.tol) converged = false;
      }
      if (converged) {
        std::map<MultiIndex, double> out;
        for (std::size_t flat = 0; flat < pass.values.size(); ++flat) {
          MultiIndex beta(n);
          std::size_t rest = flat;
          for (std::size_t i = n; i-- > 0;) {
            beta[i] = static_cast<unsigned>(rest % d);
            rest /= d;
          }
          if (total_degree(beta) <= max_degree) out.emplace(std::move(beta), pass.values[flat]);
        }
        return out;
      }
    }
    previous = std::move(pass);
  }
}

double moment(const CutoffStage& stage, const MultiIndex& beta, const QuadratureOptions& opts) {
  if (beta.size() != stage.dim()) throw InputError("moment: multi-index dimension mismatch");
  return moments(stage, total_degree(beta), opts).at(beta);
}

double l1_norm(const CutoffStage& stage, const QuadratureOptions& opts) {
  // |f_nu| has kinks at sign changes, where Gauss-Legendre converges only
  // algebraically. The norm is only a multiplicative constant in the bounds,
  // so a 1e-5 relative tolerance suffices; the last correction is added back
  // to stay on the safe side.
  const double tol = std::max(opts.tol, 1e-5);
  double previous = -1.0;
  double achieved = std::numeric_limits<double>::infinity();
  for (unsigned level = 0;; ++level) {
    const QuadratureRule rule = axis_rule(stage, 1.0, level, opts.order);
    const double points = std::pow(static_cast<double>(rule.size()), static_cast<double>(stage.dim()));
    if (rule.size() > opts.max_nodes_per_axis || points > 4e7) {
      throw NumericError(budget_message("l1_norm", achieved), achieved);
    }
    CompensatedSum sum;
    for (double v : weighted_samples(stage, rule)) sum.add(std::abs(v));
    const double value = sum.value();
    if (previous >= 0.0) {
      achieved = std::abs(value - previous) / std::max(1.0, value);
      if (achieved < tol) return value + std::abs(value - previous);
    }
    previous = value;
  }
}

void ApproxParams::validate() const {
  if (nu == 0) throw InputError("ApproxParams: nu must be a positive integer");
  check_lambda(lambda);
}

MultiPoly build_approximant(const CutoffStage& stage, double lambda, unsigned degree,
                            const QuadratureOptions& opts) {
  check_lambda(lambda);
  return build_approximant(stage, lambda, degree, moments(stage, degree, opts));
}

MultiPoly build_approximant(const CutoffStage& stage, double lambda, unsigned degree,
                            const std::map<MultiIndex, double>& m) {
  check_lambda(lambda);
  const std::size_t n = stage.dim();
  const MultiPoly kernel_poly = kernel_taylor_polynomial(degree, n);

  // Binomial coefficients up to `degree`.
  std::vector<std::vector<double>> binom(degree + 1);
  for (unsigned k = 0; k <= degree; ++k) {
    binom[k].assign(k + 1, 1.0);
    for (unsigned j = 1; j < k; ++j) binom[k][j] = binom[k - 1][j - 1] + binom[k - 1][j];
  }

  std::map<MultiIndex, CompensatedSum> acc;
  for (const auto& [gamma, a] : kernel_poly.terms()) {
    const double scaled = a * std::pow(lambda, static_cast<double>(total_degree(gamma)));
    // Enumerate beta <= gamma componentwise.
    MultiIndex beta(n, 0);
    while (true) {
      double c = scaled * m.at(beta);
      MultiIndex power(n);
      for (std::size_t i = 0; i < n; ++i) {
        c *= binom[gamma[i]][beta[i]];
        if (beta[i] % 2 == 1) c = -c;
        power[i] = gamma[i] - beta[i];
      }
      acc[power].add(c);
      std::size_t i = 0;
      while (i < n && beta[i] == gamma[i]) beta[i++] = 0;
      if (i == n) break;
      ++beta[i];
    }
  }
  const double prefactor = std::pow(lambda / normalization_1d(), static_cast<double>(n));
  MultiPoly out(n);
  for (const auto& [alpha, sum] : acc) out.add_term(alpha, prefactor * sum.value());
  return out;
}

TransferConstants transfer_constants(const CutoffStage& stage, double lambda,
                                     const QuadratureOptions& opts) {
  check_lambda(lambda);
  const double n = static_cast<double>(stage.dim());
  const double nu = static_cast<double>(stage.nu());
  TransferConstants c;
  c.l1_norm = l1_norm(stage, opts);
  c.c2 = n * lambda * (1.0 + 4.0 * nu * std::sqrt(n));
  const double k_h = std::pow(0.25, n);
  c.c1 = std::pow(lambda / normalization_1d(), n) * c.l1_norm * 2.0 * k_h * c.c2;
  return c;
}

double transfer_bound(const CutoffStage& stage, double lambda, unsigned degree, PointView x,
                      double l1_norm) {
  check_lambda(lambda);
  const double n = static_cast<double>(stage.dim());
  const double reach = euclidean_norm(x) + 2.0 * static_cast<double>(stage.nu()) * std::sqrt(n);
  return std::pow(lambda / normalization_1d(), n) * l1_norm *
         taylor_remainder_bound(degree, stage.dim(), lambda * reach);
}

}  // namespace wpa
