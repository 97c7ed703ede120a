#include "wpa/certification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "wpa/errors.hpp"

namespace wpa {

namespace {

constexpr double kRadialGuard = 1e8;
constexpr std::size_t kCoarsePoints = 4001;

double log_factorial(unsigned m) { return std::lgamma(static_cast<double>(m) + 1.0); }

double radial_log_sup(const RadialSection& section, unsigned degree) {
  const double m = static_cast<double>(degree) + 1.0;
  auto objective = [&](double r) {
    const double phi = section(r);
    if (!std::isfinite(phi)) {
      throw EvaluationError("non-finite log-weight at radius " + std::to_string(r) + " along " +
                            format_point(section.direction()));
    }
    return m * std::log1p(r) - phi;
  };

  // Bracket: grow until the objective has clearly turned down.
  double best = objective(0.0);
  double hi = 1.0;
  double prev = best;
  while (true) {
    const double v = objective(hi);
    best = std::max(best, v);
    if (v < best - 30.0 && v < prev) break;
    prev = v;
    hi *= 2.0;
    if (hi > kRadialGuard) {
      throw DivergingRatioError("sup of (1+|x|)^" + std::to_string(degree + 1) +
                                "/Phi not attained before radius 1e8 along " +
                                format_point(section.direction()));
    }
  }

  const std::vector<double> r = uniform_nodes(0.0, hi, kCoarsePoints);
  std::size_t arg = 0;
  double coarse = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = objective(r[i]);
    if (v > coarse) {
      coarse = v;
      arg = i;
    }
  }

  // Golden-section refinement around the best coarse node.
  double a = r[arg == 0 ? 0 : arg - 1];
  double b = r[std::min(arg + 1, r.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  return std::max({coarse, fc, fd});
}

}  // namespace

double log_sup_ratio(const Weight& w, unsigned degree, const std::vector<Point>& directions) {
  if (directions.empty()) throw InputError("log_sup_ratio: no directions");
  double best = -std::numeric_limits<double>::infinity();
  for (const Point& sigma : directions) {
    best = std::max(best, radial_log_sup(radial_section(w, sigma), degree));
  }
  return best;
}

double sup_ratio(const Weight& w, unsigned degree, const std::vector<Point>& directions) {
  return std::exp(log_sup_ratio(w, degree, directions));
}

double sup_ratio(const Weight& w, unsigned degree) {
  return sup_ratio(w, degree, sample_directions(w));
}

RadialConjugateTable::RadialConjugateTable(const Weight& w, std::vector<Point> directions,
                                           double max_argument,
                                           const RadialConjugateOptions& options)
    : directions_(std::move(directions)), max_argument_(max_argument) {
  if (directions_.empty()) throw InputError("RadialConjugateTable: no directions");
  if (!(max_argument_ >= 0.0)) throw InputError("RadialConjugateTable: negative argument");

  for (const Point& sigma : directions_) {
    const RadialSection section = radial_section(w, sigma);
    std::optional<SampledFunction> primal;
    std::optional<SampledFunction> dual;
    std::string last_error = "sampled radius limit reached";
    for (double T = options.initial_radius; T <= options.max_radius; T *= 2.0) {
      const auto count = static_cast<std::size_t>(std::min(
          std::ceil(T / options.step) + 1.0, static_cast<double>(options.max_source_nodes)));
      const SampledFunction g =
          SampledFunction::sample([&](double t) { return section(t); }, T, count);
      if (!primal) {
        const double span = std::log(T);
        const auto nodes = static_cast<std::size_t>(std::min(
            std::ceil(span / options.exp_grid.step) + 1.0,
            static_cast<double>(options.exp_grid.max_nodes)));
        SampledFunction candidate = exp_substitute(g, span, nodes);
        if (candidate.extrapolation_slope() >= max_argument_) primal = std::move(candidate);
      }
      if (!dual_failure_) {
        try {
          ExpConjugatePair pair(g, options.exp_grid);
          if (pair.conjugate_exp_substituted().extrapolation_slope() >= max_argument_) {
            dual = pair.conjugate_exp_substituted();
          } else {
            last_error = "conjugate argument exceeds representable slope of the dual conjugate";
          }
        } catch (const DomainError& e) {
          last_error = e.what();
        }
      }
      if (primal && (dual || dual_failure_)) break;
    }
    if (!primal) {
      throw DomainError("conjugate argument exceeds representable slope: phi_sigma[e] along " +
                        format_point(sigma) + " grows too slowly");
    }
    primal_.push_back(std::move(*primal));
    if (dual && !dual_failure_) {
      dual_.push_back(std::move(*dual));
    } else if (!dual_failure_) {
      dual_failure_ = last_error + " (direction " + format_point(sigma) + ")";
      dual_.clear();
    }
  }
}

double RadialConjugateTable::max_primal(double xi) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : primal_) best = std::max(best, young_conjugate(p, xi));
  return best;
}

std::vector<double> RadialConjugateTable::dual_values(double xi) const {
  if (dual_failure_) throw DomainError(*dual_failure_);
  std::vector<double> out;
  out.reserve(dual_.size());
  for (const auto& d : dual_) out.push_back(young_conjugate(d, xi));
  return out;
}

double RadialConjugateTable::min_dual(double xi) const {
  const std::vector<double> v = dual_values(xi);
  return *std::min_element(v.begin(), v.end());
}

double log_conjugate_form_bound(const RadialConjugateTable& table, unsigned degree) {
  const double m = static_cast<double>(degree) + 1.0;
  return m * std::numbers::ln2 + std::max(0.0, table.max_primal(m));
}

double conjugate_form_bound(const Weight& w, unsigned degree,
                            const std::vector<Point>& directions) {
  const RadialConjugateTable table(w, directions, static_cast<double>(degree) + 1.0);
  return std::exp(log_conjugate_form_bound(table, degree));
}

double log_lemma_form_bound(const RadialConjugateTable& table, unsigned degree) {
  const double m = static_cast<double>(degree) + 1.0;
  return m * std::numbers::ln2 + std::max(0.0, lemma_bound(m) - table.min_dual(m));
}

double log_remainder_bound(const BoundConstants& c, double log_sup_ratio_value, unsigned degree) {
  if (!(c.c1 >= 0.0) || !(c.c2 > 0.0)) throw InputError("bound constants: need c1 >= 0, c2 > 0");
  return std::log(c.c1) + static_cast<double>(degree) * std::log(c.c2) -
         log_factorial(degree + 1) + log_sup_ratio_value;
}

double remainder_bound(const BoundConstants& c, const Weight& w, unsigned degree,
                       const std::vector<Point>& directions) {
  return std::exp(log_remainder_bound(c, log_sup_ratio(w, degree, directions), degree));
}

double log_conjugate_remainder_bound(const BoundConstants& c, const RadialConjugateTable& table,
                                     unsigned degree) {
  if (!(c.c1 >= 0.0) || !(c.c2 > 0.0)) throw InputError("bound constants: need c1 >= 0, c2 > 0");
  const double m = static_cast<double>(degree) + 1.0;
  const double branch = std::max(-log_factorial(degree + 1), -table.min_dual(m));
  return std::log(2.0 * c.c1) + static_cast<double>(degree) * std::log(2.0 * c.c2) + branch;
}

double conjugate_remainder_bound(const BoundConstants& c, const Weight& w, unsigned degree,
                                 const std::vector<Point>& directions) {
  const RadialConjugateTable table(w, directions, static_cast<double>(degree) + 1.0);
  return std::exp(log_conjugate_remainder_bound(c, table, degree));
}

BoundChain bound_chain(const BoundConstants& c, const Weight& w, const RadialConjugateTable& table,
                       unsigned degree) {
  BoundChain chain;
  chain.degree = degree;
  chain.log_sup_ratio = log_sup_ratio(w, degree, table.directions());
  chain.log_conjugate_form = log_conjugate_form_bound(table, degree);
  chain.log_remainder = log_remainder_bound(c, chain.log_sup_ratio, degree);
  chain.log_remainder_conjugate = log_remainder_bound(c, chain.log_conjugate_form, degree);
  if (table.dual_available()) {
    chain.log_lemma_form = log_lemma_form_bound(table, degree);
    chain.log_remainder_lemma = log_remainder_bound(c, *chain.log_lemma_form, degree);
    chain.log_conjugate_remainder = log_conjugate_remainder_bound(c, table, degree);
  }
  return chain;
}

LimitReport limit_diagnostic(const Weight& w, const std::vector<Point>& directions,
                             const std::vector<double>& arguments,
                             const RadialConjugateOptions& options) {
  if (arguments.empty()) throw InputError("limit_diagnostic: no arguments");
  for (std::size_t k = 0; k < arguments.size(); ++k) {
    if (!(arguments[k] > 0.0) || (k > 0 && !(arguments[k] > arguments[k - 1]))) {
      throw InputError("limit_diagnostic: arguments must be positive and increasing");
    }
  }
  LimitReport report;
  report.arguments = arguments;
  try {
    const RadialConjugateTable table(w, directions, arguments.back(), options);
    if (!table.dual_available()) {
      report.failure = table.dual_failure();
      return report;
    }
    for (double xi : arguments) report.min_ratios.push_back(table.min_dual(xi) / xi);
  } catch (const DomainError& e) {
    report.failure = e.what();
    return report;
  }
  report.consistent = true;
  for (std::size_t k = 1; k < report.min_ratios.size(); ++k) {
    if (!(report.min_ratios[k] > report.min_ratios[k - 1])) report.consistent = false;
  }
  return report;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string certificate_csv_header() {
  return "nu,lambda,N,measured,sup_ratio,bound3,bound4,limit_flag";
}

std::string certificate_csv_row(const ErrorCertificate& c) {
  std::ostringstream os;
  os << c.params.nu << ',' << format_real(c.params.lambda) << ',' << c.params.degree << ','
     << format_real(c.measured) << ',' << format_real(c.sup_ratio) << ','
     << format_real(c.bound3) << ','
     << format_real(c.bound4.value_or(std::numeric_limits<double>::quiet_NaN())) << ','
     << (c.limit_consistent ? "admissible-consistent" : "non-admissible");
  return os.str();
}

}  // namespace wpa
