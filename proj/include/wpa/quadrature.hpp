#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wpa {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Legendre rule with `order` points on [-1, 1] (Newton iteration on
/// the three-term recurrence). Exact for polynomials of degree 2*order-1.
QuadratureRule gauss_legendre(std::size_t order);

/// Composite Gauss-Legendre rule. Interval [breaks[i], breaks[i+1]] is cut
/// into subpanels[i] equal pieces, each carrying an `order`-point rule.
QuadratureRule composite_gauss_legendre(std::span<const double> breaks,
                                        std::span<const std::size_t> subpanels,
                                        std::size_t order);

/// Adaptive 15-point Gauss-Kronrod integration of fn over [a, b].
/// Throws NumericError when the estimated error stays above `tol`.
double integrate_adaptive(const std::function<double(double)>& fn, double a, double b,
                          double tol);

/// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace wpa
