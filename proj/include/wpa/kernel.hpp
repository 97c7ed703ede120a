#pragma once

#include <cstddef>

#include "wpa/grid.hpp"
#include "wpa/multipoly.hpp"

namespace wpa {

/// h(z) = sin^2(z/2) / z^2: entire, of exponential type 1, nonnegative and
/// integrable on the real line, with 0 <= h <= h(0) = 1/4.
///
/// For |z| <= 1e-2 the even Maclaurin series (7 terms) replaces the closed
/// form, which loses all digits to cancellation near the origin.
double kernel_1d(double z);

/// Coefficient of z^k in the Maclaurin series of h: 0 for odd k,
/// (-1)^j / (2 (2j+2)!) for k = 2j.
double kernel_1d_taylor_coeff(unsigned k);

/// k-th derivative of h from h(z) = 1/2 int_0^1 (1-w) cos(w z) dw, which
/// stays accurate at every z and order.
double kernel_1d_derivative(unsigned k, double z);

/// H(x) = h(x_1) ... h(x_n).
double kernel_nd(PointView x);

/// int_{-a}^{a} h.
double kernel_mass_1d(double a);

/// int_{|z| > a} h, computed directly (no cancellation against the total).
double kernel_tail_1d(double a);

/// Upper bound for int_{|t| > radius} H(t) dt: the mass outside the cube of
/// half-side radius/sqrt(n) inscribed in the ball. Exact for n = 1.
double kernel_tail_mass(std::size_t dim, double radius);

struct KernelConstants {
  std::size_t dim = 0;
  /// int_R h (analytically pi/2).
  double normalization_1d = 0.0;
  /// A = int_{R^n} H = normalization_1d^n.
  double normalization = 0.0;
  /// K_H with |D^alpha H| <= K_H on R^n for every alpha. Fixed to 4^{-n}:
  /// each factor obeys |h^{(k)}| <= sup|h| = 1/4 (Bernstein's inequality for
  /// exponential type 1).
  double derivative_bound = 0.0;
};

/// Throws NumericError if the quadrature for the normalization fails.
KernelConstants kernel_constants(std::size_t dim);

/// U_N: the total-degree-N Taylor polynomial of H at 0, built as the
/// truncated product of the n univariate series of h.
MultiPoly kernel_taylor_polynomial(unsigned degree, std::size_t dim);

/// 2 K_H n^{N+1} |x|^{N+1} / (N+1)!, evaluated in log space.
double taylor_remainder_bound(unsigned degree, std::size_t dim, PointView x);

/// The same bound at a given radius |x| = r.
double taylor_remainder_bound(unsigned degree, std::size_t dim, double radius);

}  // namespace wpa
