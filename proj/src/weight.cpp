#include "wpa/weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wpa/errors.hpp"

namespace wpa {

namespace {

std::string describe(const std::string& name,
                     std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os.precision(17);
  os << name;
  for (const auto& [key, value] : params) os << ' ' << key << '=' << value;
  return os.str();
}

void check_dim(std::size_t expected, PointView x, const char* who) {
  if (x.size() != expected) {
    throw InputError(std::string(who) + ": expected a point of dimension " +
                     std::to_string(expected) + ", got " + std::to_string(x.size()));
  }
}

// |v| * exp(-phi), falling back to log space when exp(-phi) underflows.
double damped(double v, double phi) {
  const double av = std::abs(v);
  if (av == 0.0) return 0.0;
  const double e = std::exp(-phi);
  const double r = av * e;
  if (e == 0.0 || !std::isfinite(r)) return std::exp(std::log(av) - phi);
  return r;
}

}  // namespace

Weight::Weight(std::size_t dim, LogEvaluator log_weight, std::string family, bool radial)
    : dim_(dim), log_weight_(std::move(log_weight)), family_(std::move(family)), radial_(radial) {
  if (dim_ == 0) throw InputError("Weight: dimension must be positive");
  if (!log_weight_) throw InputError("Weight: empty evaluator");
}

Weight Weight::exp_power(std::size_t dim, double a, double p) {
  if (!(a > 0.0) || !(p > 1.0)) throw InputError("exp-power weight needs a > 0 and p > 1");
  return Weight(
      dim, [a, p](PointView x) { return a * std::pow(euclidean_norm(x), p); },
      describe("exp-power", {{"a", a}, {"p", p}}), true);
}

Weight Weight::exp_anisotropic(std::vector<double> a, std::vector<double> p) {
  if (a.empty() || a.size() != p.size()) {
    throw InputError("exp-anisotropic weight needs one (a_i, p_i) pair per axis");
  }
  std::ostringstream os;
  os.precision(17);
  os << "exp-anisotropic";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !(p[i] > 1.0)) {
      throw InputError("exp-anisotropic weight needs a_i > 0 and p_i > 1");
    }
    os << " a" << i + 1 << '=' << a[i] << " p" << i + 1 << '=' << p[i];
  }
  const std::size_t dim = a.size();
  return Weight(
      dim,
      [a = std::move(a), p = std::move(p)](PointView x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += a[i] * std::pow(std::abs(x[i]), p[i]);
        return s;
      },
      os.str(), false);
}

Weight Weight::exp_linear(std::size_t dim, double c) {
  if (!(c > 0.0)) throw InputError("exp-linear weight needs c > 0");
  return Weight(
      dim, [c](PointView x) { return c * euclidean_norm(x); }, describe("exp-linear", {{"c", c}}),
      true);
}

Weight Weight::polynomial(std::size_t dim, double k) {
  if (!(k > 0.0)) throw InputError("polynomial weight needs k > 0");
  return Weight(
      dim,
      [k](PointView x) {
        const double r = euclidean_norm(x);
        return k * std::log1p(r * r);
      },
      describe("polynomial", {{"k", k}}), true);
}

double Weight::log_value(PointView x) const {
  check_dim(dim_, x, "Weight");
  return log_weight_(x);
}

RadialSection::RadialSection(Weight weight, Point direction)
    : weight_(std::move(weight)), direction_(std::move(direction)) {}

double RadialSection::operator()(double t) const {
  Point x(direction_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = t * direction_[i];
  return weight_.log_value(x);
}

RadialSection radial_section(const Weight& w, Point direction) {
  if (direction.size() != w.dim()) throw InputError("radial_section: dimension mismatch");
  const double norm = euclidean_norm(direction);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InputError("radial_section: direction is not a unit vector (norm " +
                     std::to_string(norm) + ")");
  }
  return RadialSection(w, std::move(direction));
}

std::vector<Point> sample_directions(const Weight& w, std::size_t count) {
  const std::size_t n = w.dim();
  std::vector<Point> dirs;
  if (w.radial()) {
    Point e(n, 0.0);
    e[0] = 1.0;
    dirs.push_back(e);
    return dirs;
  }
  if (n == 1) return {{1.0}, {-1.0}};
  if (n == 2) {
    if (count == 0) throw InputError("sample_directions: count must be positive");
    for (std::size_t k = 0; k < count; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(count);
      dirs.push_back({std::cos(angle), std::sin(angle)});
    }
    return dirs;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      Point e(n, 0.0);
      e[i] = s;
      dirs.push_back(e);
    }
  }
  const double c = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Point d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (mask >> i & 1U) ? -c : c;
    dirs.push_back(d);
  }
  return dirs;
}

TargetFunction::TargetFunction(std::size_t dim, Evaluator eval, std::string name,
                               std::optional<double> decay_hint)
    : dim_(dim), eval_(std::move(eval)), name_(std::move(name)), decay_hint_(decay_hint) {
  if (dim_ == 0) throw InputError("TargetFunction: dimension must be positive");
  if (!eval_) throw InputError("TargetFunction: empty evaluator");
}

TargetFunction TargetFunction::named(const std::string& name, std::size_t dim) {
  if (name == "zero") return {dim, [](PointView) { return 0.0; }, name};
  if (name == "one") return {dim, [](PointView) { return 1.0; }, name};
  if (name == "sin") return {dim, [](PointView x) { return std::sin(x[0]); }, name};
  if (name == "sin-cos") {
    if (dim < 2) throw InputError("target sin-cos needs dimension >= 2");
    return {dim, [](PointView x) { return std::sin(x[0]) * std::cos(x[1]); }, name};
  }
  if (name == "exp") return {dim, [](PointView x) { return std::exp(x[0]); }, name};
  if (name == "gauss") {
    return {dim,
            [](PointView x) {
              const double r = euclidean_norm(x);
              return std::exp(-r * r);
            },
            name, 6.0};
  }
  throw InputError("unknown target function '" + name + "'");
}

double TargetFunction::operator()(PointView x) const {
  check_dim(dim_, x, "TargetFunction");
  return eval_(x);
}

double weighted_sup(const TensorGrid& grid, std::span<const double> values, const Weight& w) {
  if (values.size() != grid.size()) throw InputError("weighted_sup: value count mismatch");
  if (grid.dim() != w.dim()) throw InputError("weighted_sup: dimension mismatch");
  double best = 0.0;
  grid.for_each([&](std::size_t k, PointView x) {
    const double v = values[k];
    const double phi = w.log_value(x);
    if (!std::isfinite(v) || !std::isfinite(phi)) {
      throw EvaluationError("non-finite value at grid node " + format_point(x) +
                            (std::isfinite(v) ? " (weight)" : " (function)"));
    }
    best = std::max(best, damped(v, phi));
  });
  return best;
}

double weighted_norm_estimate(const TargetFunction& f, const Weight& w, double radius,
                              std::size_t m) {
  if (!(radius > 0.0)) throw InputError("weighted_norm_estimate: radius must be positive");
  if (m < 2) throw InputError("weighted_norm_estimate: need at least 2 points per axis");
  if (f.dim() != w.dim()) throw InputError("weighted_norm_estimate: dimension mismatch");
  const TensorGrid grid = TensorGrid::cube(f.dim(), uniform_nodes(-radius, radius, m));
  std::vector<double> values(grid.size());
  grid.for_each([&](std::size_t k, PointView x) { values[k] = f(x); });
  return weighted_sup(grid, values, w);
}

std::size_t default_grid_points(std::size_t dim) noexcept { return dim == 1 ? 201 : 101; }

MembershipReport membership_check(const Weight& w, std::span<const double> radii,
                                  const std::vector<Point>& directions) {
  if (radii.empty()) throw InputError("membership_check: no radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] >= 1.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw InputError("membership_check: radii must be strictly increasing and >= 1");
    }
  }
  MembershipReport report;
  report.radii.assign(radii.begin(), radii.end());
  report.directions = directions;
  report.consistent = !directions.empty();
  for (const Point& sigma : directions) {
    const RadialSection section = radial_section(w, sigma);
    std::vector<double> row;
    for (double r : radii) {
      const double value = section(r);
      if (!std::isfinite(value)) {
        throw EvaluationError("non-finite log-weight at radius " + std::to_string(r) +
                              " along " + format_point(sigma));
      }
      row.push_back(value / r);
    }
    // Rounding in |r*sigma| must not turn a constant ratio into an increasing one.
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (!(row[k] > row[k - 1] + 1e-9 * std::max(1.0, std::abs(row[k - 1])))) {
        report.consistent = false;
      }
    }
    report.ratios.push_back(std::move(row));
  }
  return report;
}

double lipschitz_estimate(const TargetFunction& f, double radius, std::size_t m) {
  const std::vector<double> nodes = uniform_nodes(-radius, radius, m);
  const TensorGrid grid = TensorGrid::cube(f.dim(), nodes);
  std::vector<double> values(grid.size());
  grid.for_each([&](std::size_t k, PointView x) { values[k] = f(x); });
  const double h = nodes[1] - nodes[0];
  double best = 0.0;
  std::size_t stride = 1;
  for (std::size_t axis = f.dim(); axis-- > 0;) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if ((k / stride) % m == m - 1) continue;
      best = std::max(best, std::abs(values[k + stride] - values[k]) / h);
    }
    stride *= m;
  }
  return best;
}

}  // namespace wpa
