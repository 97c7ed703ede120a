#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wpa/certification.hpp"
#include "wpa/errors.hpp"
#include "wpa/pipeline.hpp"

using namespace wpa;

namespace {

// Closed forms for Phi = exp(|x|^2), every direction:
//   (phi[e])*(xi)     = sup_{t>=0} xi t - e^{2t}
//   ((phi*)[e])*(xi)  = sup_{s>=0} xi s - e^{2s}/4
double primal_square(double xi) {
  return xi >= 2.0 ? 0.5 * xi * std::log(0.5 * xi) - 0.5 * xi : -1.0;
}
double dual_square(double xi) {
  return xi >= 0.5 ? 0.5 * xi * std::log(2.0 * xi) - 0.5 * xi : -0.25;
}

// Brute-force radial sup of (N+1) ln(1+r) - phi(r sigma), on a fine grid.
double brute_log_ratio(const Weight& w, unsigned N, const std::vector<Point>& dirs, double rmax) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Point& s : dirs) {
    for (double r = 0.0; r <= rmax; r += 1e-4) {
      Point x(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) x[i] = r * s[i];
      best = std::max(best, (N + 1.0) * std::log1p(r) - w.log_value(x));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("sup ratio examples") {
  const Weight w = Weight::exp_power(1, 1.0, 2.0);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  const double exact = std::exp(2.0 * std::log1p(r) - r * r);
  CHECK(sup_ratio(w, 1) == doctest::Approx(exact).epsilon(1e-10));
  CHECK(exact == doctest::Approx(1.787).epsilon(1e-3));
  CHECK(sup_ratio(w, 0) >= 1.0);

  const Weight lin = Weight::exp_linear(1, 1.0);
  for (unsigned N : {1u, 5u, 20u}) {
    CHECK(sup_ratio(lin, N) == doctest::Approx(std::exp((N + 1.0) * std::log1p(N) - N)).epsilon(1e-9));
  }
}

TEST_CASE("sup ratio matches a brute-force radial sweep") {
  const Weight w = Weight::exp_anisotropic({1.0, 0.5}, {2.0, 3.0});
  const auto dirs = sample_directions(w, 16);
  for (unsigned N : {0u, 3u, 9u}) {
    CHECK(log_sup_ratio(w, N, dirs) == doctest::Approx(brute_log_ratio(w, N, dirs, 6.0)).epsilon(1e-7));
  }
}

TEST_CASE("polynomial weights give a diverging ratio") {
  CHECK_THROWS_AS(sup_ratio(Weight::polynomial(1, 1.0), 3), DivergingRatioError);
}

TEST_CASE("property: sup ratio is non-decreasing in N") {
  for (const Weight& w : {Weight::exp_power(2, 1.0, 2.0), Weight::exp_power(1, 0.5, 1.5),
                          Weight::exp_anisotropic({1.0, 2.0}, {2.0, 4.0})}) {
    const auto dirs = sample_directions(w, 32);
    double previous = 0.0;
    for (unsigned N = 0; N <= 20; ++N) {
      const double v = log_sup_ratio(w, N, dirs);
      CHECK(v >= previous);
      previous = v;
    }
  }
}

TEST_CASE("conjugate table agrees with closed forms") {
  const Weight w = Weight::exp_power(2, 1.0, 2.0);
  const std::vector<Point> dirs{{1.0, 0.0}, {0.6, 0.8}, {0.0, -1.0}};
  const RadialConjugateTable table(w, dirs, 30.0);
  for (double xi : {0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0}) {
    CHECK(table.max_primal(xi) == doctest::Approx(primal_square(xi)).epsilon(1e-7));
    CHECK(table.min_dual(xi) == doctest::Approx(dual_square(xi)).epsilon(1e-7));
    const auto per_dir = table.dual_values(xi);
    for (double v : per_dir) CHECK(v == doctest::Approx(per_dir.front()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(RadialConjugateTable(w, dirs, -1.0), InputError);
}

TEST_CASE("conjugate form bound example and domination") {
  const Weight w = Weight::exp_power(1, 1.0, 2.0);
  CHECK(conjugate_form_bound(w, 1, sample_directions(w)) == doctest::Approx(4.0).epsilon(1e-9));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Weight> weights{Weight::exp_power(1, 1.0, 2.0), Weight::exp_power(2, 0.3, 1.5),
                              Weight::exp_power(2, 2.0, 4.0),
                              Weight::exp_anisotropic({1.0, 0.5}, {2.0, 3.0})};
  for (int k = 0; k < 3; ++k) {
    weights.push_back(Weight::exp_anisotropic({0.2 + u(rng), 0.2 + u(rng)}, {1.3 + 2 * u(rng), 1.3 + 2 * u(rng)}));
  }
  for (const Weight& w2 : weights) {
    const auto dirs = sample_directions(w2, 32);
    const RadialConjugateTable table(w2, dirs, 21.0);
    for (unsigned N = 0; N <= 20; ++N) {
      CHECK(log_sup_ratio(w2, N, dirs) <= log_conjugate_form_bound(table, N) + 1e-9);
    }
  }
}

TEST_CASE("remainder bound arithmetic") {
  CHECK(std::exp(log_remainder_bound({1.0, 2.0}, 0.0, 3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::exp(log_remainder_bound({0.0, 2.0}, 0.0, 3)) == 0.0);
  CHECK_THROWS_AS(log_remainder_bound({1.0, 0.0}, 0.0, 3), InputError);
}

TEST_CASE("eq3 bound eventually decreases for fixed constants") {
  const Weight w = Weight::exp_power(1, 1.0, 2.0);
  const auto dirs = sample_directions(w);
  const BoundConstants c{1.0, 2.0};
  std::vector<double> b;
  for (unsigned N = 0; N <= 40; ++N) b.push_back(log_remainder_bound(c, log_sup_ratio(w, N, dirs), N));
  unsigned threshold = 40;
  for (unsigned N = 40; N-- > 0;) {
    if (!(b[N + 1] < b[N])) break;
    threshold = N;
  }
  CHECK(threshold <= 30);
  CHECK(b.back() < b.front());
}

TEST_CASE("eq4 bound: branches against an independent evaluation") {
  const Weight w = Weight::exp_power(1, 1.0, 2.0);
  const auto dirs = sample_directions(w);
  const RadialConjugateTable table(w, dirs, 31.0);
  const BoundConstants c{1.5, 3.0};
  for (unsigned N : {0u, 1u, 5u, 12u, 30u}) {
    const double m = N + 1.0;
    const double first = std::log(2.0 * c.c1) + N * std::log(2.0 * c.c2) - std::lgamma(m + 1.0);
    const double second = std::log(2.0 * c.c1) + N * std::log(2.0 * c.c2) - dual_square(m);
    CHECK(log_conjugate_remainder_bound(c, table, N) ==
          doctest::Approx(std::max(first, second)).epsilon(1e-8));
  }
  // N = 0: 2 C1 max(1, e^{-d}) with d = (ln 2 - 1)/2 the dual conjugate at 1.
  CHECK(std::exp(log_conjugate_remainder_bound(c, table, 0)) ==
        doctest::Approx(3.0 * std::exp(0.5 - 0.5 * std::log(2.0))).epsilon(1e-8));

  // For exp(x^4) the dual conjugate grows like (3/4) xi ln xi, slower than
  // ln (N+1)!, so the conjugate branch is the active one at every N.
  const Weight quartic = Weight::exp_power(1, 1.0, 4.0);
  const RadialConjugateTable qt(quartic, sample_directions(quartic), 21.0);
  for (unsigned N : {1u, 5u, 10u, 20u}) {
    CHECK(qt.min_dual(N + 1.0) < std::lgamma(N + 2.0));
  }
}

TEST_CASE("eq4 bound strictly decreases beyond a threshold for admissible weights") {
  const BoundConstants c{1.0, 1.0};
  for (const Weight& w : {Weight::exp_power(1, 1.0, 2.0), Weight::exp_power(2, 1.0, 3.0),
                          Weight::exp_anisotropic({1.0, 0.5}, {2.0, 2.5})}) {
    const auto dirs = sample_directions(w, 32);
    const RadialConjugateTable table(w, dirs, 41.0);
    std::vector<double> b;
    for (unsigned N = 0; N <= 40; ++N) b.push_back(log_conjugate_remainder_bound(c, table, N));
    unsigned threshold = 40;
    for (unsigned N = 40; N-- > 0;) {
      if (!(b[N + 1] < b[N])) break;
      threshold = N;
    }
    CHECK(threshold <= 30);
  }
}

TEST_CASE("bound chain is ordered") {
  const BoundConstants c{2.0, 3.0};
  for (const Weight& w : {Weight::exp_power(1, 1.0, 2.0), Weight::exp_anisotropic({1.0, 0.5}, {2.0, 3.0})}) {
    const auto dirs = sample_directions(w, 32);
    const RadialConjugateTable table(w, dirs, 21.0);
    for (unsigned N = 0; N <= 20; ++N) {
      const BoundChain b = bound_chain(c, w, table, N);
      REQUIRE(b.log_remainder_lemma);
      REQUIRE(b.log_conjugate_remainder);
      CHECK(b.log_remainder <= b.log_remainder_conjugate + 1e-9);
      CHECK(b.log_remainder_conjugate <= *b.log_remainder_lemma + 1e-9);
      CHECK(*b.log_remainder_lemma <= *b.log_conjugate_remainder + 1e-9);
    }
  }
}

TEST_CASE("eq3 bound dominates the measured stage error on the demo problem") {
  const QuadratureOptions opts;
  const Weight w = Weight::exp_power(1, 1.0, 2.0);
  const auto dirs = sample_directions(w);
  const CutoffStage s(TargetFunction::named("sin", 1), 2);
  const TensorGrid grid = TensorGrid::cube(1, uniform_nodes(-8.0, 8.0, 201));
  const auto smooth = mollify_on_grid(s, 5.0, grid, opts);
  const TransferConstants tc = transfer_constants(s, 5.0, opts);
  const auto table = moments(s, 20, opts);
  for (unsigned N = 0; N <= 20; ++N) {
    const MultiPoly v = build_approximant(s, 5.0, N, table);
    std::vector<double> diff(grid.size());
    grid.for_each([&](std::size_t k, PointView x) { diff[k] = smooth[k] - v(x); });
    const double measured = weighted_sup(grid, diff, w);
    CHECK(measured <= std::exp(log_remainder_bound({tc.c1, tc.c2}, log_sup_ratio(w, N, dirs), N)));
  }
}

TEST_CASE("limit diagnostic") {
  const Weight w = Weight::exp_power(1, 1.0, 2.0);
  const LimitReport ok = limit_diagnostic(w, sample_directions(w), {5.0, 10.0, 20.0});
  CHECK(ok.consistent);
  CHECK_FALSE(ok.failure);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(ok.min_ratios[k] == doctest::Approx(dual_square(ok.arguments[k]) / ok.arguments[k]).epsilon(1e-7));
  }
  const Weight lin = Weight::exp_linear(2, 1.0);
  const LimitReport bad = limit_diagnostic(lin, sample_directions(lin), {5.0, 10.0, 20.0});
  CHECK_FALSE(bad.consistent);
  REQUIRE(bad.failure);
  CHECK(bad.failure->find("slope") != std::string::npos);
  const RadialConjugateTable lt(lin, sample_directions(lin), 5.0);
  CHECK_FALSE(lt.dual_available());
  CHECK_THROWS_AS(lt.min_dual(1.0), DomainError);
  CHECK_THROWS_AS(limit_diagnostic(w, sample_directions(w), {5.0, 5.0}), InputError);
}

TEST_CASE("certificate CSV") {
  CHECK(certificate_csv_header() == "nu,lambda,N,measured,sup_ratio,bound3,bound4,limit_flag");
  ErrorCertificate c;
  c.params = {2, 5.0, 3};
  c.measured = 0.1;
  c.sup_ratio = 1.5;
  c.bound3 = 2.0;
  c.limit_consistent = true;
  CHECK(certificate_csv_row(c) == "2,5,3,0.10000000000000001,1.5,2,nan,admissible-consistent");
  c.bound4 = 4.0;
  c.limit_consistent = false;
  CHECK(certificate_csv_row(c) == "2,5,3,0.10000000000000001,1.5,2,4,non-admissible");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}
