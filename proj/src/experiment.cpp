#include "wpa/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "wpa/errors.hpp"

namespace wpa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
  key = trim(key);
  while (key.starts_with("-")) key.erase(0, 1);
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

double to_double(const std::string& text, const std::string& key, std::size_t line) {
  std::istringstream is(trim(text));
  double v = 0.0;
  is >> v;
  if (!is || !(is >> std::ws).eof()) throw ConfigError("bad number '" + text + "' for " + key, line);
  return v;
}

unsigned long long to_unsigned(const std::string& text, const std::string& key, std::size_t line) {
  const std::string t = trim(text);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("bad non-negative integer '" + text + "' for " + key, line);
  }
  return std::stoull(t);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!trim(item).empty()) out.push_back(trim(item));
      item.clear();
    } else {
      item += c;
    }
  }
  if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericError& e) {
    throw NumericError(std::string(stage) + ": " + e.what(), e.achieved());
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw NumericError(std::string(stage) + ": " + e.what(), std::nan(""));
  }
}

}  // namespace

Weight parse_weight(const std::string& spec, std::size_t dim) {
  const auto colon = spec.find(':');
  const std::string family = trim(spec.substr(0, colon));
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    for (const std::string& item : split_list(spec.substr(colon + 1))) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("weight parameter '" + item + "' lacks '='");
      params[trim(item.substr(0, eq))] = to_double(item.substr(eq + 1), item, 0);
    }
  }
  auto get = [&](const std::string& key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (family == "exp-power") return Weight::exp_power(dim, get("a", 1.0), get("p", 2.0));
  if (family == "exp-linear") return Weight::exp_linear(dim, get("c", 1.0));
  if (family == "polynomial") return Weight::polynomial(dim, get("k", 1.0));
  if (family == "exp-anisotropic") {
    std::vector<double> a;
    std::vector<double> p;
    for (std::size_t i = 1; i <= dim; ++i) {
      a.push_back(get("a" + std::to_string(i), 1.0));
      p.push_back(get("p" + std::to_string(i), 2.0));
    }
    return Weight::exp_anisotropic(std::move(a), std::move(p));
  }
  throw InputError("unknown weight family '" + family + "'");
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& value, std::size_t line) {
  const std::string key = normalize_key(raw_key);
  const std::string v = trim(value);
  if (key == "dim") {
    dim = to_unsigned(v, key, line);
  } else if (key == "weight") {
    weight = v;
  } else if (key == "target") {
    target = v;
  } else if (key == "nu" || key == "nu-schedule") {
    nu_schedule.clear();
    for (const auto& item : split_list(v)) {
      nu_schedule.push_back(static_cast<unsigned>(to_unsigned(item, key, line)));
    }
  } else if (key == "lambda" || key == "lambda-schedule") {
    lambda_schedule.clear();
    for (const auto& item : split_list(v)) lambda_schedule.push_back(to_double(item, key, line));
  } else if (key == "n-min") {
    n_min = static_cast<unsigned>(to_unsigned(v, key, line));
  } else if (key == "n-max") {
    n_max = static_cast<unsigned>(to_unsigned(v, key, line));
  } else if (key == "n-step") {
    n_step = static_cast<unsigned>(to_unsigned(v, key, line));
  } else if (key == "tol") {
    tol = to_double(v, key, line);
  } else if (key == "target-error") {
    target_error = to_double(v, key, line);
  } else if (key == "radius") {
    radius = to_double(v, key, line);
  } else if (key == "grid") {
    grid = to_unsigned(v, key, line);
  } else if (key == "directions") {
    directions = to_unsigned(v, key, line);
  } else if (key == "out") {
    out = v;
  } else if (key == "seed") {
    seed = to_unsigned(v, key, line);
  } else {
    throw ConfigError("unknown key '" + trim(raw_key) + "'", line);
  }
}

void ExperimentConfig::validate() const {
  if (dim == 0) throw ConfigError("dim must be positive", 0);
  if (nu_schedule.empty()) throw ConfigError("nu schedule is empty", 0);
  if (lambda_schedule.empty()) throw ConfigError("lambda schedule is empty", 0);
  for (std::size_t i = 0; i < nu_schedule.size(); ++i) {
    if (nu_schedule[i] == 0) throw ConfigError("nu values must be positive", 0);
    if (i > 0 && nu_schedule[i] <= nu_schedule[i - 1]) {
      throw ConfigError("nu schedule must be increasing", 0);
    }
  }
  for (std::size_t i = 0; i < lambda_schedule.size(); ++i) {
    if (!(lambda_schedule[i] > 1.0)) throw ConfigError("lambda values must exceed 1", 0);
    if (i > 0 && !(lambda_schedule[i] > lambda_schedule[i - 1])) {
      throw ConfigError("lambda schedule must be increasing", 0);
    }
  }
  if (n_step == 0) throw ConfigError("n-step must be positive", 0);
  if (n_min > n_max) throw ConfigError("n-min exceeds n-max", 0);
  if (!(tol > 0.0)) throw ConfigError("tol must be positive", 0);
  if (!(target_error > 0.0)) throw ConfigError("target-error must be positive", 0);
  if (radius < 0.0) throw ConfigError("radius must be nonnegative", 0);
  if (radius > 0.0 && !(radius > static_cast<double>(nu_schedule.back()))) {
    throw ConfigError("radius must exceed every nu", 0);
  }
  if (grid == 1) throw ConfigError("grid needs at least 2 points per axis", 0);
  if (directions == 0) throw ConfigError("directions must be positive", 0);
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
    base.set(line.substr(0, eq), line.substr(eq + 1), line_no);
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path, 0);
  return parse_config(in, std::move(base));
}

std::string convergence_csv_header() {
  return "nu,lambda,N,cutoff_error,mollify_error,measured,measured_stage,sup_ratio,bound3,bound4";
}

std::string convergence_csv_row(const ConvergenceRow& r) {
  std::ostringstream os;
  os << r.nu << ',' << format_real(r.lambda) << ',' << r.degree << ','
     << format_real(r.cutoff_error) << ',' << format_real(r.mollify_error) << ','
     << format_real(r.measured) << ',' << format_real(r.measured_stage) << ','
     << format_real(r.sup_ratio) << ',' << format_real(r.bound3) << ','
     << format_real(r.bound4.value_or(std::nan("")));
  return os.str();
}

ConvergenceResult run_convergence(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  Weight w = [&] {
    try {
      return parse_weight(config.weight, config.dim);
    } catch (const InputError& e) {
      throw ConfigError(e.what(), 0);
    }
  }();
  TargetFunction f = [&] {
    try {
      return TargetFunction::named(config.target, config.dim);
    } catch (const InputError& e) {
      throw ConfigError(e.what(), 0);
    }
  }();

  ConvergenceResult result;
  const std::vector<Point> dirs = sample_directions(w, config.directions);
  const std::vector<double> radii{1.0, 2.0, 4.0, 8.0};
  result.membership_consistent =
      in_stage("membership", [&] { return membership_check(w, radii, dirs).consistent; });
  result.limit = in_stage("limit diagnostic",
                          [&] { return limit_diagnostic(w, dirs, {5.0, 10.0, 20.0}); });

  const RadialConjugateTable table = in_stage("certification", [&] {
    return RadialConjugateTable(w, dirs, static_cast<double>(config.n_max) + 1.0);
  });
  std::vector<unsigned> degrees;
  for (unsigned N = config.n_min; N <= config.n_max; N += config.n_step) degrees.push_back(N);
  std::map<unsigned, double> log_ratio;
  for (unsigned N : degrees) {
    log_ratio[N] = in_stage("certification", [&] { return log_sup_ratio(w, N, dirs); });
  }

  csv << "# weight: " << w.family() << '\n'
      << "# target: " << f.name() << '\n'
      << "# dim: " << config.dim << '\n'
      << "# membership: " << (result.membership_consistent ? "consistent" : "inconsistent") << '\n'
      << "# limit: " << (result.limit.consistent ? "admissible-consistent" : "non-admissible");
  if (result.limit.failure) csv << " (" << *result.limit.failure << ')';
  csv << '\n' << convergence_csv_header() << '\n';

  QuadratureOptions opts;
  opts.tol = config.tol;
  const std::size_t m = config.grid ? config.grid : default_grid_points(config.dim);

  for (unsigned nu : config.nu_schedule) {
    const double radius = config.radius > 0.0 ? config.radius : 4.0 * static_cast<double>(nu);
    const TensorGrid grid = TensorGrid::cube(config.dim, uniform_nodes(-radius, radius, m));
    std::vector<double> f_values(grid.size());
    std::vector<double> cut_values(grid.size());
    const CutoffStage stage(f, nu);
    in_stage("cutoff", [&] {
      grid.for_each([&](std::size_t k, PointView x) {
        f_values[k] = f(x);
        cut_values[k] = stage(x);
      });
    });
    const double cut_err = in_stage("cutoff", [&] { return cutoff_error(f, w, nu, radius, m); });

    for (double lambda : config.lambda_schedule) {
      const std::vector<double> smooth =
          in_stage("mollification", [&] { return mollify_on_grid(stage, lambda, grid, opts); });
      std::vector<double> diff(grid.size());
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = smooth[k] - cut_values[k];
      const double moll_err = in_stage("mollification", [&] { return weighted_sup(grid, diff, w); });

      const TransferConstants tc =
          in_stage("polynomial", [&] { return transfer_constants(stage, lambda, opts); });
      const auto moment_table =
          in_stage("polynomial", [&] { return moments(stage, config.n_max, opts); });
      const BoundConstants bc{tc.c1, tc.c2};

      for (unsigned N : degrees) {
        const MultiPoly poly = in_stage(
            "polynomial", [&] { return build_approximant(stage, lambda, N, moment_table); });
        std::vector<double> err_full(grid.size());
        std::vector<double> err_stage(grid.size());
        grid.for_each([&](std::size_t k, PointView x) {
          const double v = poly(x);
          err_full[k] = f_values[k] - v;
          err_stage[k] = smooth[k] - v;
        });
        ConvergenceRow row;
        row.nu = nu;
        row.lambda = lambda;
        row.degree = N;
        row.cutoff_error = cut_err;
        row.mollify_error = moll_err;
        row.measured = in_stage("polynomial", [&] { return weighted_sup(grid, err_full, w); });
        row.measured_stage = in_stage("polynomial", [&] { return weighted_sup(grid, err_stage, w); });
        row.sup_ratio = std::exp(log_ratio[N]);
        row.bound3 = std::exp(log_remainder_bound(bc, log_ratio[N], N));
        if (table.dual_available()) {
          row.bound4 = std::exp(log_conjugate_remainder_bound(bc, table, N));
        }
        csv << convergence_csv_row(row) << '\n';
        result.rows.push_back(row);
      }
    }
  }
  result.final_measured = result.rows.empty() ? 0.0 : result.rows.back().measured;
  result.target_reached = result.final_measured < config.target_error;
  return result;
}

namespace {

struct FamilyMember {
  std::string description;
  std::function<double(double)> g;
};

FamilyMember random_member(std::size_t index, std::mt19937_64& rng, double upper) {
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const double offset = uniform(-1.0, 1.0);
  std::ostringstream os;
  os.precision(6);
  switch (index % 4) {
    case 0: {
      const double c = uniform(0.2, 3.0);
      os << "quadratic c=" << c;
      os << " offset=" << offset;
      return {os.str(), [c, offset](double y) { return c * y * y + offset; }};
    }
    case 1: {
      const double p = uniform(1.5, 4.0);
      // Scale so that g'(upper) lies in [3, 15]: both conjugates then reach x = 20.
      const double c = uniform(3.0, 15.0) / (p * std::pow(upper, p - 1.0));
      os << "power c=" << c << " p=" << p << " offset=" << offset;
      return {os.str(), [c, p, offset](double y) { return c * std::pow(y, p) + offset; }};
    }
    case 2: {
      const double c = uniform(0.5, 2.0);
      const double a = uniform(0.5, 2.0);
      os << "exponential c=" << c << " a=" << a << " offset=" << offset;
      return {os.str(), [c, a, offset](double y) { return c * std::expm1(a * y) + offset; }};
    }
    default: {
      // Convex piecewise-linear: increasing slopes between sorted kinks.
      const int pieces = std::uniform_int_distribution<int>(3, 8)(rng);
      std::vector<double> kinks;
      std::vector<double> slopes;
      for (int k = 0; k < pieces - 1; ++k) kinks.push_back(uniform(0.0, upper));
      for (int k = 0; k < pieces; ++k) slopes.push_back(uniform(0.0, 30.0));
      std::sort(kinks.begin(), kinks.end());
      std::sort(slopes.begin(), slopes.end());
      slopes.back() = std::max(slopes.back(), 3.0);
      os << "piecewise-linear pieces=" << pieces << " offset=" << offset;
      return {os.str(), [kinks, slopes, offset](double y) {
                double v = offset;
                double left = 0.0;
                for (std::size_t k = 0; k < slopes.size(); ++k) {
                  const double right = k < kinks.size() ? kinks[k] : y;
                  const double seg_end = std::min(y, right);
                  if (seg_end > left) v += slopes[k] * (seg_end - left);
                  left = std::max(left, right);
                  if (left >= y) break;
                }
                return v;
              }};
    }
  }
}

LemmaMember scan_member(const std::string& description, const SampledFunction& g,
                        const LemmaSuiteConfig& config, double lo) {
  const ExpConjugatePair pair(g, config.exp_grid);
  LemmaMember member{description, std::numeric_limits<double>::infinity(), 0.0};
  for (double x : uniform_nodes(lo, config.x_max, config.x_count)) {
    const double gap = pair.gap(x);
    if (gap < member.min_gap) {
      member.min_gap = gap;
      member.argmin = x;
    }
  }
  return member;
}

}  // namespace

LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config) {
  if (config.family_size == 0) throw InputError("lemma suite: empty family");
  if (config.x_count < 2 || !(config.x_max > config.equality_lo)) {
    throw InputError("lemma suite: bad argument range");
  }
  const auto count = static_cast<std::size_t>(std::ceil(config.upper / config.source_step)) + 1;
  std::mt19937_64 rng(config.seed);
  LemmaSuiteReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < config.family_size; ++i) {
    const FamilyMember member = random_member(i, rng, config.upper);
    const SampledFunction g = SampledFunction::sample(member.g, config.upper, count);
    report.members.push_back(scan_member(member.description, g, config, 0.0));
    report.min_gap = std::min(report.min_gap, report.members.back().min_gap);
  }

  const SampledFunction quadratic =
      SampledFunction::sample([](double y) { return y * y; }, config.upper, count);
  const ExpConjugatePair pair(quadratic, config.exp_grid);
  for (double x : uniform_nodes(config.equality_lo, config.x_max, config.x_count)) {
    report.quadratic_residual = std::max(report.quadratic_residual, std::abs(pair.gap(x)));
  }
  return report;
}

}  // namespace wpa
