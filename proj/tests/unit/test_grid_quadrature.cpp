#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "wpa/errors.hpp"
#include "wpa/grid.hpp"
#include "wpa/quadrature.hpp"

using namespace wpa;

TEST_CASE("uniform nodes hit both endpoints and are reproducible") {
  const auto a = uniform_nodes(-3.0, 7.0, 11);
  CHECK(a.size() == 11);
  CHECK(a.front() == -3.0);
  CHECK(a.back() == 7.0);
  CHECK(a[5] == doctest::Approx(2.0));
  CHECK(a == uniform_nodes(-3.0, 7.0, 11));
  CHECK_THROWS_AS(uniform_nodes(0.0, 1.0, 1), InputError);
}

TEST_CASE("tensor grid enumerates row-major, last axis fastest") {
  const TensorGrid g({{0.0, 1.0}, {10.0, 20.0, 30.0}});
  CHECK(g.size() == 6);
  std::vector<std::vector<double>> seen;
  g.for_each([&](std::size_t k, PointView x) {
    CHECK(k == seen.size());
    seen.emplace_back(x.begin(), x.end());
  });
  CHECK(seen[1] == std::vector<double>{0.0, 20.0});
  CHECK(seen[3] == std::vector<double>{1.0, 10.0});
  std::vector<double> p(2);
  g.point(5, p);
  CHECK(p == std::vector<double>{1.0, 30.0});
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2m-1 exactly") {
  for (std::size_t m : {1u, 2u, 5u, 10u, 16u, 40u}) {
    const QuadratureRule r = gauss_legendre(m);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (unsigned k = 0; k <= 2 * m - 1; ++k) {
      double v = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) v += r.weights[q] * std::pow(r.nodes[q], k);
      const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1.0);
      CHECK(std::abs(v - exact) < 1e-13);
    }
  }
}

TEST_CASE("composite rule matches an independent tanh-sinh oracle") {
  const std::vector<double> breaks{-1.0, 0.5, 3.0};
  const std::vector<std::size_t> pieces{3, 7};
  const QuadratureRule r = composite_gauss_legendre(breaks, pieces, 10);
  auto f = [](double x) { return std::exp(std::sin(3.0 * x)) * std::cos(x); };
  double v = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) v += r.weights[q] * f(r.nodes[q]);
  boost::math::quadrature::tanh_sinh<double> ts;
  CHECK(v == doctest::Approx(ts.integrate(f, -1.0, 3.0)).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature and its failure mode") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)) * std::sin(1e4 / (x - 0.3)); },
                         0.0, 1.0, 1e-15),
      NumericError);
}

TEST_CASE("compensated sum recovers cancelled low-order bits") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);
}
