#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "appmin/analysis.hpp"
#include "appmin/baselines.hpp"
#include "appmin/config.hpp"
#include "appmin/core.hpp"
#include "appmin/harness.hpp"
#include "appmin/objectives.hpp"
#include "appmin/validate.hpp"

namespace py = pybind11;
using namespace appmin;

namespace {

// Python callables are invoked with the GIL held; runs stay single-threaded.
ObjectiveSpec python_objective(const std::string& name, int dim, py::function fn)
{
    ObjectiveSpec spec;
    spec.name = name;
    spec.dim = dim;
    spec.eval = [fn](const Point& x) { return fn(x).cast<double>(); };
    return spec;
}

py::dict trace_columns(const RunTrace& t)
{
    const auto n = static_cast<py::ssize_t>(t.records.size());
    py::array_t<double> k(n), evals(n), err(n), fbest(n), mhat(n), sigma2(n);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (py::ssize_t i = 0; i < n; ++i) {
        const IterateRecord& r = t.records[static_cast<std::size_t>(i)];
        k.mutable_at(i) = r.k;
        evals.mutable_at(i) = static_cast<double>(r.eval_count);
        err.mutable_at(i) = r.err_sq.value_or(nan);
        fbest.mutable_at(i) = r.f_best;
        mhat.mutable_at(i) = r.m_hat.value_or(nan);
        sigma2.mutable_at(i) = r.sigma2.value_or(nan);
    }
    py::dict d;
    d["k"] = k;
    d["eval_count"] = evals;
    d["err_sq"] = err;
    d["f_best"] = fbest;
    d["m_hat"] = mhat;
    d["sigma2_k"] = sigma2;
    return d;
}

}  // namespace

PYBIND11_MODULE(_appmin, m)
{
    m.doc() = "Asymptotic proximal point optimizer";

    py::register_exception<Error>(m, "AppminError", PyExc_RuntimeError);

    py::class_<GrowthConstants>(m, "GrowthConstants")
        .def_readonly("lower", &GrowthConstants::lower)
        .def_readonly("upper", &GrowthConstants::upper);

    py::class_<ObjectiveSpec>(m, "Objective")
        .def(py::init(&python_objective), py::arg("name"), py::arg("dim"), py::arg("fn"))
        .def_readonly("name", &ObjectiveSpec::name)
        .def_readonly("dim", &ObjectiveSpec::dim)
        .def_readonly("known_minimizer", &ObjectiveSpec::known_minimizer)
        .def_readonly("known_minimum", &ObjectiveSpec::known_minimum)
        .def_readonly("growth", &ObjectiveSpec::growth)
        .def("__call__", [](const ObjectiveSpec& f, const Point& x) { return f(x); });

    m.def("make_objective", &objectives::make_objective, py::arg("name"), py::arg("dim"));
    m.def("objective_names", &objectives::objective_names);

    py::class_<AppParams>(m, "AppParams")
        .def(py::init<>())
        .def_readwrite("lambda_", &AppParams::lambda)
        .def_readwrite("rho", &AppParams::rho)
        .def_readwrite("n", &AppParams::n)
        .def_readwrite("max_iters", &AppParams::max_iters)
        .def_readwrite("seed", &AppParams::seed)
        .def_readwrite("initial_point", &AppParams::initial_point)
        .def_property(
            "variant", [](const AppParams& p) { return to_string(p.variant); },
            [](AppParams& p, const std::string& v) { p.variant = parse_variant(v); })
        .def_property(
            "sampler", [](const AppParams& p) { return sampling::to_string(p.sampler); },
            [](AppParams& p, const std::string& v) { p.sampler = sampling::parse_sampler_kind(v); });

    py::class_<baselines::DEConfig>(m, "DEConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &baselines::DEConfig::population_size)
        .def_readwrite("F", &baselines::DEConfig::F)
        .def_readwrite("CR", &baselines::DEConfig::CR)
        .def_readwrite("lo", &baselines::DEConfig::lo)
        .def_readwrite("hi", &baselines::DEConfig::hi)
        .def_readwrite("max_generations", &baselines::DEConfig::max_generations)
        .def_readwrite("seed", &baselines::DEConfig::seed);

    py::class_<IterateRecord>(m, "IterateRecord")
        .def_readonly("k", &IterateRecord::k)
        .def_readonly("eval_count", &IterateRecord::eval_count)
        .def_readonly("err_sq", &IterateRecord::err_sq)
        .def_readonly("f_best", &IterateRecord::f_best)
        .def_readonly("m_hat", &IterateRecord::m_hat)
        .def_readonly("sigma2", &IterateRecord::sigma2)
        .def_readonly("x", &IterateRecord::x);

    py::class_<RunTrace>(m, "RunTrace")
        .def_readonly("solver", &RunTrace::solver)
        .def_readonly("objective", &RunTrace::objective)
        .def_readonly("dim", &RunTrace::dim)
        .def_readonly("seed", &RunTrace::seed)
        .def_readonly("records", &RunTrace::records)
        .def_readonly("provenance", &RunTrace::provenance)
        .def_readonly("failure", &RunTrace::failure)
        .def_readonly("failure_k", &RunTrace::failure_k)
        .def("final_err_sq", &RunTrace::final_err_sq)
        .def("columns", &trace_columns);

    m.def("run", &run, py::arg("objective"), py::arg("params"));
    m.def("de_run",
          [](const ObjectiveSpec& f, const baselines::DEConfig& c) { return baselines::de_run(f, c); },
          py::arg("objective"), py::arg("config"));
    m.def("weighted_mean",
          [](const PointMatrix& pts, const std::vector<double>& g) { return weighted_mean(pts, g); },
          py::arg("points"), py::arg("exponents"));

    m.def("run_config",
          [](const std::string& json_text) { return harness::run_seeds(config::parse_experiment(json_text)); },
          py::arg("json_text"), "Runs every seed of an experiment config given as JSON text.");

    py::class_<harness::RateFit>(m, "RateFit")
        .def_readonly("rho_hat", &harness::RateFit::rho_hat)
        .def_readonly("r_squared", &harness::RateFit::r_squared)
        .def_readonly("k_first", &harness::RateFit::k_first)
        .def_readonly("k_last", &harness::RateFit::k_last)
        .def_readonly("points", &harness::RateFit::points);
    m.def("fit_rate", &harness::fit_rate, py::arg("trace"), py::arg("window") = py::none());

    py::module_ a = m.def_submodule("analysis");
    a.def("gaussian_integral_i1",
          [](double alpha, double beta, double gamma, const Point& u, const Point& v) {
              return analysis::gaussian_integral_i1({alpha, beta, gamma, u, v});
          },
          py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("u"), py::arg("v"));
    a.def("gaussian_integral_i2",
          [](double alpha, double beta, double gamma, const Point& u, const Point& v) {
              return analysis::gaussian_integral_i2({alpha, beta, gamma, u, v});
          },
          py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("u"), py::arg("v"));
    a.def("rho_lambda", &analysis::rho_lambda, py::arg("l"), py::arg("L"), py::arg("lambda_"), py::arg("M"),
          py::arg("d"));
    a.def("n_lower_bound", &analysis::n_lower_bound, py::arg("l"), py::arg("L"), py::arg("lambda_"),
          py::arg("M"), py::arg("d"), py::arg("C_prob"));
    a.def("mk_bounds",
          [](double l, double L, double lambda, double M, int d, double rho, int k) {
              const analysis::MkBounds b = analysis::mk_bounds(l, L, lambda, M, d, rho, k);
              return py::make_tuple(b.lower, b.upper);
          },
          py::arg("l"), py::arg("L"), py::arg("lambda_"), py::arg("M"), py::arg("d"), py::arg("rho"),
          py::arg("k"));

    m.def("validate", [](bool inject_fault) {
        validation::Options o;
        o.inject_integral_sign_fault = inject_fault;
        py::list out;
        for (const validation::CheckResult& c : validation::validate(o).checks) {
            py::dict d;
            d["name"] = c.name;
            d["passed"] = c.passed;
            d["max_error"] = c.max_error;
            d["tolerance"] = c.tolerance;
            d["detail"] = c.detail;
            out.append(d);
        }
        return out;
    }, py::arg("inject_integral_fault") = false);
}
