#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wpa/grid.hpp"

namespace wpa {

using MultiIndex = std::vector<unsigned>;

unsigned total_degree(const MultiIndex& alpha) noexcept;

/// Sparse polynomial in n variables: multi-index -> coefficient, iterated in
/// lexicographic order. Zero coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Max |alpha| over stored terms; 0 for the zero polynomial.
  unsigned degree() const noexcept;

  double coefficient(const MultiIndex& alpha) const;
  /// Adds `coeff` to the coefficient of x^alpha, erasing it if it becomes 0.
  void add_term(const MultiIndex& alpha, double coeff);

  /// Evaluation with compensated summation over terms.
  double operator()(PointView x) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator*=(double factor);

  /// Product with every term of total degree above `max_degree` dropped.
  MultiPoly truncated_product(const MultiPoly& other, unsigned max_degree) const;

  /// One line per term: "a_1 ... a_n coefficient", coefficient printed with
  /// 17 significant digits so that reading it back is exact.
  void write(std::ostream& os) const;
  std::string to_text() const;
  static MultiPoly read(std::istream& in, std::size_t dim);
  static MultiPoly from_text(const std::string& text, std::size_t dim);

  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  std::size_t dim_;
  std::map<MultiIndex, double> terms_;
};

MultiPoly operator+(MultiPoly lhs, const MultiPoly& rhs);
MultiPoly operator*(double factor, MultiPoly p);

}  // namespace wpa
