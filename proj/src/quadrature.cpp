#include "wpa/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "wpa/errors.hpp"

namespace wpa {

namespace {

// Legendre P_n(x) and P_{n-1}(x) via the three-term recurrence.
std::pair<double, double> legendre_pair(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const auto kd = static_cast<double>(k);
    const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

QuadratureRule compute_gauss_legendre(std::size_t order) {
  QuadratureRule rule;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<double>(order);
  for (std::size_t i = 0; i < (order + 1) / 2; ++i) {
    // Tricomi's initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, pm1] = legendre_pair(order, x);
      const double dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, pm1] = legendre_pair(order, x);
    const double dp = n * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t order) {
  if (order == 0) throw InputError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breaks,
                                        std::span<const std::size_t> subpanels,
                                        std::size_t order) {
  if (breaks.size() < 2 || subpanels.size() + 1 != breaks.size()) {
    throw InputError("composite_gauss_legendre: breaks/subpanels size mismatch");
  }
  const QuadratureRule base = gauss_legendre(order);
  QuadratureRule rule;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    if (!(hi > lo)) throw InputError("composite_gauss_legendre: breaks not increasing");
    const std::size_t pieces = std::max<std::size_t>(subpanels[p], 1);
    const double width = (hi - lo) / static_cast<double>(pieces);
    for (std::size_t s = 0; s < pieces; ++s) {
      const double a = lo + width * static_cast<double>(s);
      const double half = 0.5 * width;
      const double mid = a + half;
      for (std::size_t q = 0; q < base.size(); ++q) {
        rule.nodes.push_back(mid + half * base.nodes[q]);
        rule.weights.push_back(half * base.weights[q]);
      }
    }
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& fn, double a, double b,
                          double tol) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      fn, a, b, 15, tol, &error);
  if (!(error <= tol * std::max(1.0, std::abs(value))) || !std::isfinite(value)) {
    throw NumericError("adaptive quadrature did not converge on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "], achieved " + std::to_string(error),
                       error);
  }
  return value;
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    carry_ += (sum_ - t) + v;
  } else {
    carry_ += (v - t) + sum_;
  }
  sum_ = t;
}

}  // namespace wpa
