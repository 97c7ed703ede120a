#include "wpa/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "wpa/errors.hpp"
#include "wpa/grid.hpp"

namespace wpa {

namespace {

constexpr double kSlopeSlack = 1e-12;

void check_argument(const SampledFunction& g, double x) {
  if (!(x >= 0.0)) throw InputError("young_conjugate: argument must be nonnegative");
  if (x > g.extrapolation_slope() * (1.0 + kSlopeSlack)) {
    std::ostringstream os;
    os.precision(17);
    os << "conjugate argument exceeds representable slope (x = " << x
       << ", slope = " << g.extrapolation_slope() << ")";
    throw DomainError(os.str());
  }
}

std::size_t node_count(double span, const ConjugateGridOptions& options) {
  const double raw = std::ceil(span / options.step) + 1.0;
  return static_cast<std::size_t>(std::clamp(raw, 2.0, static_cast<double>(options.max_nodes)));
}

bool parse_double(const std::string& text, double& out) {
  std::istringstream is(text);
  is >> out;
  if (!is) return false;
  is >> std::ws;
  return is.eof();
}

}  // namespace

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values,
                                 std::optional<double> extrapolation_slope)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) throw InputError("SampledFunction: size mismatch");
  if (grid_.empty()) throw InputError("SampledFunction: empty grid");
  if (grid_.size() < 2) throw InputError("SampledFunction: single-node grid");
  if (grid_.front() != 0.0) throw InputError("SampledFunction: grid must start at 0");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i])) {
      throw InputError("SampledFunction: non-finite entry at node " + std::to_string(i));
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw InputError("SampledFunction: grid not strictly increasing at node " +
                       std::to_string(i));
    }
  }
  const std::size_t m = grid_.size() - 1;
  slope_ = extrapolation_slope.value_or((values_[m] - values_[m - 1]) / (grid_[m] - grid_[m - 1]));
  if (!std::isfinite(slope_)) throw InputError("SampledFunction: non-finite extrapolation slope");
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& g,
                                        std::vector<double> grid,
                                        std::optional<double> extrapolation_slope) {
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), g);
  return SampledFunction(std::move(grid), std::move(values), extrapolation_slope);
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& g, double upper,
                                        std::size_t count) {
  return sample(g, uniform_nodes(0.0, upper, count));
}

SampledFunction SampledFunction::read_csv(std::istream& in) {
  std::vector<double> grid;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto comma = line.find(',');
    double t = 0.0;
    double v = 0.0;
    const bool ok = comma != std::string::npos && parse_double(line.substr(0, comma), t) &&
                    parse_double(line.substr(comma + 1), v);
    if (!ok) {
      if (!seen_data && grid.empty()) {
        seen_data = true;  // header
        continue;
      }
      throw InputError("SampledFunction CSV: malformed line " + std::to_string(line_no));
    }
    seen_data = true;
    grid.push_back(t);
    values.push_back(v);
  }
  return SampledFunction(std::move(grid), std::move(values));
}

SampledFunction SampledFunction::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_csv(in);
}

double SampledFunction::operator()(double t) const {
  if (t < 0.0) throw DomainError("SampledFunction: negative abscissa");
  if (t >= grid_.back()) return values_.back() + slope_ * (t - grid_.back());
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const auto i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  const double w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

bool SampledFunction::superlinear(double slope_floor) const {
  const std::size_t m = grid_.size() - 1;
  const std::size_t half = m / 2;
  const double q = (values_[m] - values_[half]) / (grid_[m] - grid_[half]);
  return q > slope_floor;
}

double young_conjugate(const SampledFunction& g, double x) {
  check_argument(g, x);
  const auto& t = g.grid();
  const auto& v = g.values();
  double best = -v[0];
  for (std::size_t i = 1; i < t.size(); ++i) best = std::max(best, x * t[i] - v[i]);
  return best;
}

std::vector<double> young_conjugate(const SampledFunction& g, std::span<const double> xs) {
  for (double x : xs) check_argument(g, x);
  const auto& t = g.grid();
  const auto& v = g.values();

  // Lower convex hull (monotone chain over increasing t).
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < t.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull.back();
      const double cross = (t[b] - t[a]) * (v[i] - v[a]) - (v[b] - v[a]) * (t[i] - t[a]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<double> out(xs.size());
  std::size_t h = 0;
  for (std::size_t q : order) {
    const double x = xs[q];
    while (h + 1 < hull.size() &&
           x * t[hull[h + 1]] - v[hull[h + 1]] >= x * t[hull[h]] - v[hull[h]]) {
      ++h;
    }
    out[q] = x * t[hull[h]] - v[hull[h]];
  }
  return out;
}

SampledFunction conjugate_function(const SampledFunction& g, std::vector<double> slopes) {
  std::vector<double> values = young_conjugate(g, slopes);
  return SampledFunction(std::move(slopes), std::move(values));
}

SampledFunction exp_substitute(const SampledFunction& g, double span, std::size_t count) {
  if (!(span > 0.0)) throw DomainError("exp_substitute: span must be positive");
  const double needed = std::exp(span);
  if (needed > g.upper() * (1.0 + kSlopeSlack)) {
    std::ostringstream os;
    os.precision(17);
    os << "exp_substitute: source grid ends at " << g.upper() << ", span needs " << needed;
    throw DomainError(os.str());
  }
  std::vector<double> s = uniform_nodes(0.0, span, count);
  std::vector<double> values(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) values[j] = g(std::min(std::exp(s[j]), g.upper()));
  return SampledFunction(std::move(s), std::move(values));
}

double lemma_bound(double x) {
  if (x < 0.0) throw InputError("lemma_bound: negative argument");
  return x == 0.0 ? 0.0 : x * std::log(x) - x;
}

struct ExpConjugatePair::Parts {
  SampledFunction primal;
  SampledFunction conjugate;
  SampledFunction dual;
};

ExpConjugatePair::Parts ExpConjugatePair::build(const SampledFunction& g, const ConjugateGridOptions& options) {
  if (!(g.upper() > 1.0)) {
    throw DomainError("exponential substitution needs a grid extending beyond 1");
  }
  if (!(g.extrapolation_slope() > 1.0)) {
    throw DomainError("conjugate argument exceeds representable slope: g grows too slowly "
                      "for its conjugate to cover [1, e^s]");
  }
  const double primal_span = std::log(g.upper());
  SampledFunction primal = exp_substitute(g, primal_span, node_count(primal_span, options));

  const double dual_span = std::log(g.extrapolation_slope());
  const std::vector<double> s = uniform_nodes(0.0, dual_span, node_count(dual_span, options));
  std::vector<double> slopes;
  slopes.reserve(s.size() + 1);
  slopes.push_back(0.0);
  for (double sj : s) slopes.push_back(std::exp(sj));
  SampledFunction conjugate = conjugate_function(g, std::move(slopes));
  SampledFunction dual = exp_substitute(conjugate, dual_span, s.size());
  return {std::move(primal), std::move(conjugate), std::move(dual)};
}

ExpConjugatePair::ExpConjugatePair(const SampledFunction& g, const ConjugateGridOptions& options)
    : ExpConjugatePair(build(g, options)) {}

ExpConjugatePair::ExpConjugatePair(Parts&& parts)
    : primal_(std::move(parts.primal)),
      conjugate_(std::move(parts.conjugate)),
      dual_(std::move(parts.dual)) {}

double ExpConjugatePair::max_argument() const noexcept {
  return std::min(primal_.extrapolation_slope(), dual_.extrapolation_slope());
}

double lemma_gap(const SampledFunction& g, double x, const ConjugateGridOptions& options) {
  return ExpConjugatePair(g, options).gap(x);
}

}  // namespace wpa
