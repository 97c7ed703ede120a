#include "wpa/kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "wpa/errors.hpp"
#include "wpa/quadrature.hpp"

namespace wpa {

namespace {

constexpr double kSeriesRadius = 1e-2;
constexpr unsigned kSeriesTerms = 7;  // j = 0..6
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPanelTol = 1e-12;
constexpr std::size_t kTailPeriods = 50;

double factorial(unsigned k) { return std::tgamma(static_cast<double>(k) + 1.0); }

// int_L^inf h for L a multiple of 2*pi (sin L = 0, cos L = 1), from repeated
// integration by parts of int cos z / z^2.
double asymptotic_tail(double L) {
  const double L2 = L * L;
  const double L3 = L2 * L;
  const double L5 = L3 * L2;
  const double L7 = L5 * L2;
  return 0.5 / L - 1.0 / L3 + 12.0 / L5 - 360.0 / L7;
}

// int_a^b h on [a, b] using one adaptive panel per period.
double integrate_periods(double a, double b) {
  CompensatedSum sum;
  double lo = a;
  auto k = static_cast<long>(std::floor(a / kTwoPi)) + 1;
  while (lo < b) {
    const double hi = std::min(b, static_cast<double>(k) * kTwoPi);
    if (hi > lo) sum.add(integrate_adaptive(kernel_1d, lo, hi, kPanelTol));
    lo = std::max(lo, hi);
    ++k;
  }
  return sum.value();
}

}  // namespace

double kernel_1d(double z) {
  if (std::abs(z) <= kSeriesRadius) {
    const double z2 = z * z;
    double acc = 0.0;
    static const auto coeffs = [] {
      std::array<double, kSeriesTerms> c{};
      for (unsigned j = 0; j < kSeriesTerms; ++j) c[j] = kernel_1d_taylor_coeff(2 * j);
      return c;
    }();
    for (unsigned j = kSeriesTerms; j-- > 0;) acc = acc * z2 + coeffs[j];
    return acc;
  }
  const double s = std::sin(0.5 * z);
  return s * s / (z * z);
}

double kernel_1d_taylor_coeff(unsigned k) {
  if (k % 2 == 1) return 0.0;
  const unsigned j = k / 2;
  const double sign = j % 2 == 0 ? 1.0 : -1.0;
  return sign / (2.0 * factorial(2 * j + 2));
}

double kernel_1d_derivative(unsigned k, double z) {
  const auto panels = static_cast<std::size_t>(std::ceil(std::abs(z) / 2.0)) + 1;
  const std::array<double, 2> breaks{0.0, 1.0};
  const std::array<std::size_t, 1> pieces{panels};
  const QuadratureRule rule = composite_gauss_legendre(breaks, pieces, 16);
  const double phase = 0.5 * std::numbers::pi * static_cast<double>(k % 4);
  CompensatedSum sum;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double w = rule.nodes[q];
    sum.add(rule.weights[q] * (1.0 - w) * std::pow(w, k) * std::cos(w * z + phase));
  }
  return 0.5 * sum.value();
}

double kernel_nd(PointView x) {
  if (x.empty()) throw InputError("kernel_nd: empty point");
  double v = 1.0;
  for (double xi : x) v *= kernel_1d(xi);
  return v;
}

double kernel_mass_1d(double a) {
  if (!(a >= 0.0)) throw InputError("kernel_mass_1d: negative half-width");
  return 2.0 * integrate_periods(0.0, a);
}

double kernel_tail_1d(double a) {
  if (!(a >= 0.0)) throw InputError("kernel_tail_1d: negative half-width");
  const double L = (std::ceil(a / kTwoPi) + static_cast<double>(kTailPeriods)) * kTwoPi;
  return 2.0 * (integrate_periods(a, L) + asymptotic_tail(L));
}

double kernel_tail_mass(std::size_t dim, double radius) {
  if (dim == 0) throw InputError("kernel_tail_mass: dimension must be positive");
  const double half_side = radius / std::sqrt(static_cast<double>(dim));
  const double a1 = kernel_tail_1d(0.0);
  const double tail = kernel_tail_1d(half_side);
  // A^n - (A - tail)^n without cancellation.
  double inside_pow = 1.0;
  double total = 0.0;
  const double inside = a1 - tail;
  for (std::size_t k = 0; k < dim; ++k) {
    total += inside_pow * tail * std::pow(a1, static_cast<double>(dim - 1 - k));
    inside_pow *= inside;
  }
  return total;
}

KernelConstants kernel_constants(std::size_t dim) {
  if (dim == 0) throw InputError("kernel_constants: dimension must be positive");
  KernelConstants c;
  c.dim = dim;
  c.normalization_1d = kernel_tail_1d(0.0);
  c.normalization = std::pow(c.normalization_1d, static_cast<double>(dim));
  c.derivative_bound = std::pow(0.25, static_cast<double>(dim));
  return c;
}

MultiPoly kernel_taylor_polynomial(unsigned degree, std::size_t dim) {
  if (dim == 0) throw InputError("kernel_taylor_polynomial: dimension must be positive");
  MultiPoly product(dim);
  product.add_term(MultiIndex(dim, 0), 1.0);
  for (std::size_t axis = 0; axis < dim; ++axis) {
    MultiPoly factor(dim);
    for (unsigned k = 0; k <= degree; ++k) {
      MultiIndex alpha(dim, 0);
      alpha[axis] = k;
      factor.add_term(alpha, kernel_1d_taylor_coeff(k));
    }
    product = product.truncated_product(factor, degree);
  }
  return product;
}

double taylor_remainder_bound(unsigned degree, std::size_t dim, double radius) {
  if (!(radius >= 0.0)) throw InputError("taylor_remainder_bound: negative radius");
  if (radius == 0.0) return 0.0;
  const double k_h = std::pow(0.25, static_cast<double>(dim));
  const double m = static_cast<double>(degree) + 1.0;
  const double log_bound = std::log(2.0 * k_h) + m * std::log(static_cast<double>(dim)) +
                           m * std::log(radius) - std::lgamma(m + 1.0);
  return std::exp(log_bound);
}

double taylor_remainder_bound(unsigned degree, std::size_t dim, PointView x) {
  if (x.size() != dim) throw InputError("taylor_remainder_bound: dimension mismatch");
  return taylor_remainder_bound(degree, dim, euclidean_norm(x));
}

}  // namespace wpa
