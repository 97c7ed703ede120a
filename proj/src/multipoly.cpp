#include "wpa/multipoly.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "wpa/errors.hpp"
#include "wpa/quadrature.hpp"

namespace wpa {

unsigned total_degree(const MultiIndex& alpha) noexcept {
  return std::accumulate(alpha.begin(), alpha.end(), 0U);
}

MultiPoly::MultiPoly(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw InputError("MultiPoly: dimension must be positive");
}

unsigned MultiPoly::degree() const noexcept {
  unsigned d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, total_degree(alpha));
  return d;
}

double MultiPoly::coefficient(const MultiIndex& alpha) const {
  const auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void MultiPoly::add_term(const MultiIndex& alpha, double coeff) {
  if (alpha.size() != dim_) throw InputError("MultiPoly: multi-index dimension mismatch");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double MultiPoly::operator()(PointView x) const {
  if (x.size() != dim_) throw InputError("MultiPoly: point dimension mismatch");
  const unsigned deg = degree();
  std::vector<std::vector<double>> powers(dim_, std::vector<double>(deg + 1, 1.0));
  for (std::size_t i = 0; i < dim_; ++i) {
    for (unsigned k = 1; k <= deg; ++k) powers[i][k] = powers[i][k - 1] * x[i];
  }
  CompensatedSum sum;
  for (const auto& [alpha, c] : terms_) {
    double term = c;
    for (std::size_t i = 0; i < dim_; ++i) term *= powers[i][alpha[i]];
    sum.add(term);
  }
  return sum.value();
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.dim_ != dim_) throw InputError("MultiPoly: dimension mismatch");
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(double factor) {
  if (factor == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= factor;
    it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

MultiPoly MultiPoly::truncated_product(const MultiPoly& other, unsigned max_degree) const {
  if (other.dim_ != dim_) throw InputError("MultiPoly: dimension mismatch");
  std::map<MultiIndex, CompensatedSum> acc;
  for (const auto& [a, ca] : terms_) {
    const unsigned da = total_degree(a);
    for (const auto& [b, cb] : other.terms_) {
      if (da + total_degree(b) > max_degree) continue;
      MultiIndex sum(dim_);
      for (std::size_t i = 0; i < dim_; ++i) sum[i] = a[i] + b[i];
      acc[sum].add(ca * cb);
    }
  }
  MultiPoly out(dim_);
  for (const auto& [alpha, s] : acc) out.add_term(alpha, s.value());
  return out;
}

void MultiPoly::write(std::ostream& os) const {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  for (const auto& [alpha, c] : terms_) {
    for (unsigned a : alpha) os << a << ' ';
    os << c << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

std::string MultiPoly::to_text() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

MultiPoly MultiPoly::read(std::istream& in, std::size_t dim) {
  MultiPoly p(dim);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream is(line);
    MultiIndex alpha(dim);
    double c = 0.0;
    for (auto& a : alpha) is >> a;
    is >> c;
    if (!is) throw InputError("MultiPoly: malformed line " + std::to_string(line_no));
    std::string rest;
    if (is >> rest) throw InputError("MultiPoly: trailing tokens on line " + std::to_string(line_no));
    p.add_term(alpha, c);
  }
  return p;
}

MultiPoly MultiPoly::from_text(const std::string& text, std::size_t dim) {
  std::istringstream in(text);
  return read(in, dim);
}

MultiPoly operator+(MultiPoly lhs, const MultiPoly& rhs) {
  lhs += rhs;
  return lhs;
}

MultiPoly operator*(double factor, MultiPoly p) {
  p *= factor;
  return p;
}

}  // namespace wpa
