#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wpa/errors.hpp"
#include "wpa/multipoly.hpp"

using namespace wpa;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, std::size_t dim, unsigned max_degree, int terms) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::normal_distribution<double> coeff(0.0, 1.0);
  MultiPoly p(dim);
  for (int t = 0; t < terms; ++t) {
    MultiIndex a(dim);
    for (auto& ai : a) ai = deg(rng);
    p.add_term(a, coeff(rng) * std::pow(10.0, static_cast<double>(deg(rng)) - 3.0));
  }
  return p;
}

double naive_eval(const MultiPoly& p, PointView x) {
  double v = 0.0;
  for (const auto& [a, c] : p.terms()) {
    double m = c;
    for (std::size_t i = 0; i < a.size(); ++i) m *= std::pow(x[i], static_cast<double>(a[i]));
    v += m;
  }
  return v;
}

}  // namespace

TEST_CASE("terms, zero erasure and degree") {
  MultiPoly p(2);
  CHECK(p.is_zero());
  CHECK(p.degree() == 0);
  p.add_term({2, 1}, 3.0);
  p.add_term({0, 1}, -1.0);
  CHECK(p.degree() == 3);
  CHECK(p.coefficient({2, 1}) == 3.0);
  CHECK(p.coefficient({5, 5}) == 0.0);
  p.add_term({2, 1}, -3.0);
  CHECK(p.terms().size() == 1);
  CHECK(p.degree() == 1);
  CHECK_THROWS_AS(p.add_term({1}, 1.0), InputError);
  const double x[2] = {2.0, 5.0};
  CHECK(p(x) == -5.0);
}

TEST_CASE("arithmetic agrees with naive evaluation") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const MultiPoly p = random_poly(rng, dim, 4, 6);
    const MultiPoly q = random_poly(rng, dim, 4, 6);
    const MultiPoly prod = p.truncated_product(q, 5);
    CHECK(prod.degree() <= 5);
    const MultiPoly s = p + 2.5 * q;
    std::vector<double> x(dim);
    for (auto& xi : x) xi = u(rng);
    CHECK(s(x) == doctest::Approx(naive_eval(p, x) + 2.5 * naive_eval(q, x)).epsilon(1e-12));

    // The truncated product equals the full product minus its high-degree part.
    MultiPoly full(dim);
    for (const auto& [a, ca] : p.terms()) {
      for (const auto& [b, cb] : q.terms()) {
        MultiIndex g(dim);
        for (std::size_t i = 0; i < dim; ++i) g[i] = a[i] + b[i];
        if (total_degree(g) <= 5) full.add_term(g, ca * cb);
      }
    }
    for (const auto& [g, c] : full.terms()) CHECK(prod.coefficient(g) == doctest::Approx(c).epsilon(1e-13));
    CHECK(prod.terms().size() <= full.terms().size());
  }
}

TEST_CASE("text serialization round-trips exactly") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const MultiPoly p = random_poly(rng, dim, 6, 10);
    CHECK(MultiPoly::from_text(p.to_text(), dim) == p);
  }
  MultiPoly p(2);
  p.add_term({1, 2}, 0.1);
  CHECK(p.to_text() == "1 2 0.10000000000000001\n");
  CHECK_THROWS_AS(MultiPoly::from_text("1 2\n", 2), InputError);
  CHECK_THROWS_AS(MultiPoly::from_text("1 x 3.0\n", 2), InputError);
  CHECK(MultiPoly::from_text("", 2).is_zero());
}
