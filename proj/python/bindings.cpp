#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wpa/certification.hpp"
#include "wpa/conjugate.hpp"
#include "wpa/errors.hpp"
#include "wpa/experiment.hpp"
#include "wpa/kernel.hpp"
#include "wpa/pipeline.hpp"

namespace py = pybind11;
using namespace wpa;

namespace {

std::vector<Point> directions_or_default(const Weight& w, std::optional<std::vector<Point>> dirs) {
  return dirs ? *dirs : sample_directions(w);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted polynomial approximation: kernels, conjugates, approximants and bounds";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", input.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", error.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", error.ptr());
  py::register_exception<DivergingRatioError>(m, "DivergingRatioError", numeric.ptr());

  py::class_<Weight>(m, "Weight")
      .def(py::init([](std::size_t dim, std::function<double(std::vector<double>)> log_weight,
                       std::string family, bool radial) {
             return Weight(dim, [log_weight](PointView x) { return log_weight({x.begin(), x.end()}); },
                           std::move(family), radial);
           }),
           py::arg("dim"), py::arg("log_weight"), py::arg("family") = "custom", py::arg("radial") = false)
      .def_static("exp_power", &Weight::exp_power, py::arg("dim"), py::arg("a"), py::arg("p"))
      .def_static("exp_anisotropic", &Weight::exp_anisotropic, py::arg("a"), py::arg("p"))
      .def_static("exp_linear", &Weight::exp_linear, py::arg("dim"), py::arg("c"))
      .def_static("polynomial", &Weight::polynomial, py::arg("dim"), py::arg("k"))
      .def_static("parse", &parse_weight, py::arg("spec"), py::arg("dim"))
      .def_property_readonly("dim", &Weight::dim)
      .def_property_readonly("family", &Weight::family)
      .def_property_readonly("radial", &Weight::radial)
      .def("log_value", [](const Weight& w, const Point& x) { return w.log_value(x); })
      .def("__repr__", [](const Weight& w) { return "<Weight " + w.family() + ">"; });

  m.def("sample_directions", &sample_directions, py::arg("weight"), py::arg("count") = 64);

  py::class_<TargetFunction>(m, "TargetFunction")
      .def(py::init([](std::size_t dim, std::function<double(std::vector<double>)> f, std::string name) {
             return TargetFunction(dim, [f](PointView x) { return f({x.begin(), x.end()}); }, std::move(name));
           }),
           py::arg("dim"), py::arg("function"), py::arg("name") = "custom")
      .def_static("named", &TargetFunction::named, py::arg("name"), py::arg("dim"))
      .def_property_readonly("dim", &TargetFunction::dim)
      .def_property_readonly("name", &TargetFunction::name)
      .def("__call__", [](const TargetFunction& f, const Point& x) { return f(x); });

  m.def("weighted_norm_estimate", &weighted_norm_estimate, py::arg("f"), py::arg("weight"), py::arg("radius"),
        py::arg("m"));

  py::class_<MembershipReport>(m, "MembershipReport")
      .def_readonly("radii", &MembershipReport::radii)
      .def_readonly("ratios", &MembershipReport::ratios)
      .def_readonly("consistent", &MembershipReport::consistent);
  m.def("membership_check",
        [](const Weight& w, std::vector<double> radii, std::optional<std::vector<Point>> dirs) {
          return membership_check(w, radii, directions_or_default(w, std::move(dirs)));
        },
        py::arg("weight"), py::arg("radii"), py::arg("directions") = py::none());

  py::class_<SampledFunction>(m, "SampledFunction")
      .def(py::init<std::vector<double>, std::vector<double>, std::optional<double>>(), py::arg("grid"),
           py::arg("values"), py::arg("extrapolation_slope") = py::none())
      .def_static("sample",
                  py::overload_cast<const std::function<double(double)>&, double, std::size_t>(
                      &SampledFunction::sample),
                  py::arg("g"), py::arg("upper"), py::arg("count"))
      .def_static("load_csv", &SampledFunction::load_csv, py::arg("path"))
      .def_property_readonly("grid", &SampledFunction::grid)
      .def_property_readonly("values", &SampledFunction::values)
      .def_property_readonly("extrapolation_slope", &SampledFunction::extrapolation_slope)
      .def("__call__", &SampledFunction::operator());

  m.def("young_conjugate", py::overload_cast<const SampledFunction&, double>(&young_conjugate), py::arg("g"),
        py::arg("x"));
  m.def("exp_substitute", &exp_substitute, py::arg("g"), py::arg("span"), py::arg("count"));
  m.def("lemma_bound", &lemma_bound, py::arg("x"));
  m.def("lemma_gap",
        [](const SampledFunction& g, double x, double step) { return lemma_gap(g, x, {step}); },
        py::arg("g"), py::arg("x"), py::arg("step") = 1e-4);

  py::class_<MultiPoly>(m, "MultiPoly")
      .def_property_readonly("dim", &MultiPoly::dim)
      .def_property_readonly("degree", &MultiPoly::degree)
      .def_property_readonly("terms", [](const MultiPoly& p) {
        py::dict d;
        for (const auto& [a, c] : p.terms()) d[py::tuple(py::cast(a))] = c;
        return d;
      })
      .def("coefficient", &MultiPoly::coefficient)
      .def("__call__", [](const MultiPoly& p, const Point& x) { return p(x); })
      .def("to_text", &MultiPoly::to_text)
      .def_static("from_text", &MultiPoly::from_text, py::arg("text"), py::arg("dim"))
      .def(py::self == py::self);

  m.def("kernel_1d", &kernel_1d, py::arg("z"));
  m.def("kernel_nd", [](const Point& x) { return kernel_nd(x); }, py::arg("x"));
  m.def("kernel_taylor_coeff", &kernel_1d_taylor_coeff, py::arg("k"));
  m.def("kernel_derivative", &kernel_1d_derivative, py::arg("k"), py::arg("z"));
  m.def("kernel_normalization", [](std::size_t dim) { return kernel_constants(dim).normalization; },
        py::arg("dim"));
  m.def("kernel_taylor_polynomial", &kernel_taylor_polynomial, py::arg("degree"), py::arg("dim"));
  m.def("taylor_remainder_bound",
        py::overload_cast<unsigned, std::size_t, double>(&taylor_remainder_bound), py::arg("degree"),
        py::arg("dim"), py::arg("radius"));

  py::class_<QuadratureOptions>(m, "QuadratureOptions")
      .def(py::init<>())
      .def_readwrite("tol", &QuadratureOptions::tol)
      .def_readwrite("order", &QuadratureOptions::order)
      .def_readwrite("max_nodes_per_axis", &QuadratureOptions::max_nodes_per_axis);

  py::class_<CutoffStage>(m, "CutoffStage")
      .def(py::init<TargetFunction, unsigned>(), py::arg("f"), py::arg("nu"))
      .def_property_readonly("nu", &CutoffStage::nu)
      .def("__call__", [](const CutoffStage& s, const Point& x) { return s(x); });

  m.def("smooth_cutoff", [](double t) { return smooth_cutoff()(t); }, py::arg("t"));
  m.def("mollify",
        [](const CutoffStage& s, double lambda, const Point& x, const QuadratureOptions& o) {
          return mollify(s, lambda, x, o);
        },
        py::arg("stage"), py::arg("lam"), py::arg("x"), py::arg("options") = QuadratureOptions{});
  m.def("moments", &moments, py::arg("stage"), py::arg("max_degree"), py::arg("options") = QuadratureOptions{});
  m.def("build_approximant",
        py::overload_cast<const CutoffStage&, double, unsigned, const QuadratureOptions&>(&build_approximant),
        py::arg("stage"), py::arg("lam"), py::arg("degree"), py::arg("options") = QuadratureOptions{});

  m.def("sup_ratio",
        [](const Weight& w, unsigned n, std::optional<std::vector<Point>> dirs) {
          return sup_ratio(w, n, directions_or_default(w, std::move(dirs)));
        },
        py::arg("weight"), py::arg("degree"), py::arg("directions") = py::none());
  m.def("conjugate_form_bound",
        [](const Weight& w, unsigned n, std::optional<std::vector<Point>> dirs) {
          return conjugate_form_bound(w, n, directions_or_default(w, std::move(dirs)));
        },
        py::arg("weight"), py::arg("degree"), py::arg("directions") = py::none());

  py::class_<LimitReport>(m, "LimitReport")
      .def_readonly("arguments", &LimitReport::arguments)
      .def_readonly("min_ratios", &LimitReport::min_ratios)
      .def_readonly("consistent", &LimitReport::consistent)
      .def_readonly("failure", &LimitReport::failure);
  m.def("limit_diagnostic",
        [](const Weight& w, std::vector<double> args, std::optional<std::vector<Point>> dirs) {
          return limit_diagnostic(w, directions_or_default(w, std::move(dirs)), args);
        },
        py::arg("weight"), py::arg("arguments"), py::arg("directions") = py::none());

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("dim", &ExperimentConfig::dim)
      .def_readwrite("weight", &ExperimentConfig::weight)
      .def_readwrite("target", &ExperimentConfig::target)
      .def_readwrite("nu_schedule", &ExperimentConfig::nu_schedule)
      .def_readwrite("lambda_schedule", &ExperimentConfig::lambda_schedule)
      .def_readwrite("n_min", &ExperimentConfig::n_min)
      .def_readwrite("n_max", &ExperimentConfig::n_max)
      .def_readwrite("n_step", &ExperimentConfig::n_step)
      .def_readwrite("tol", &ExperimentConfig::tol)
      .def_readwrite("target_error", &ExperimentConfig::target_error)
      .def_readwrite("radius", &ExperimentConfig::radius)
      .def_readwrite("grid", &ExperimentConfig::grid)
      .def_readwrite("directions", &ExperimentConfig::directions)
      .def("set", &ExperimentConfig::set, py::arg("key"), py::arg("value"), py::arg("line") = 0)
      .def("validate", &ExperimentConfig::validate);

  m.def("run_convergence",
        [](const ExperimentConfig& c) {
          std::ostringstream csv;
          const ConvergenceResult r = run_convergence(c, csv);
          py::dict out;
          out["csv"] = csv.str();
          out["final_measured"] = r.final_measured;
          out["target_reached"] = r.target_reached;
          out["membership_consistent"] = r.membership_consistent;
          out["limit_consistent"] = r.limit.consistent;
          return out;
        },
        py::arg("config"));

  m.def("run_lemma_suite",
        [](std::size_t family_size, std::uint64_t seed) {
          LemmaSuiteConfig c;
          c.family_size = family_size;
          c.seed = seed;
          const LemmaSuiteReport r = run_lemma_suite(c);
          py::dict out;
          out["min_gap"] = r.min_gap;
          out["quadratic_residual"] = r.quadratic_residual;
          out["members"] = r.members.size();
          return out;
        },
        py::arg("family_size") = 50, py::arg("seed") = 1);
}
