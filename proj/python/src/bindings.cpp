#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mic/baselines.hpp"
#include "mic/csv.hpp"
#include "mic/glm.hpp"
#include "mic/inference.hpp"
#include "mic/mic.hpp"
#include "mic/reparam.hpp"
#include "mic/report.hpp"
#include "mic/simlab.hpp"

namespace py = pybind11;
using namespace mic;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const json& v : j) out.append(to_py(v));
      return std::move(out);
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = to_py(it.value());
      return std::move(out);
    }
    default:
      return py::none();
  }
}

Support names_to_support(const Dataset& d, const std::optional<std::vector<std::string>>& names) {
  if (!names) return full_support(d.p());
  Support s;
  for (const std::string& n : *names) {
    const auto it = std::find(d.column_names.begin(), d.column_names.end(), n);
    if (it == d.column_names.end()) throw InvalidInput("unknown column '" + n + "'");
    s.push_back(static_cast<int>(it - d.column_names.begin()));
  }
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<std::string> support_names(const Dataset& d, const Support& s) {
  std::vector<std::string> out;
  for (int j : s) out.push_back(d.column_names[static_cast<size_t>(j)]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse GLM estimation by minimizing an approximated information criterion";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<SingularDesign>(m, "SingularDesign", PyExc_ArithmeticError);
  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("X", &Dataset::X)
      .def_readonly("y", &Dataset::y)
      .def_readonly("column_names", &Dataset::column_names)
      .def_readonly("has_intercept", &Dataset::has_intercept)
      .def_property_readonly("family", [](const Dataset& d) { return std::string(family_name(d.family)); })
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p)
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset " + std::string(family_name(d.family)) + " n=" + std::to_string(d.n()) +
               " p=" + std::to_string(d.p()) + ">";
      });

  m.def(
      "make_dataset",
      [](Matrix X, Vector y, const std::string& family, std::vector<std::string> names, bool standardize,
         bool intercept, bool standardize_response) {
        DatasetOptions o;
        o.standardize = standardize;
        o.add_intercept = intercept;
        o.standardize_response = standardize_response;
        return make_dataset(std::move(X), std::move(y), parse_family(family), std::move(names), o);
      },
      py::arg("X"), py::arg("y"), py::arg("family") = "gaussian", py::arg("names") = std::vector<std::string>{},
      py::arg("standardize") = true, py::arg("intercept") = false, py::arg("standardize_response") = false);

  m.def(
      "load_csv",
      [](const std::string& path, const std::string& response, const std::string& family,
         std::vector<std::string> predictors, std::vector<std::string> interactions, std::optional<bool> intercept,
         bool standardize_response) {
        IngestOptions o;
        o.response = response;
        o.family = parse_family(family);
        o.predictors = std::move(predictors);
        o.interactions = std::move(interactions);
        o.add_intercept = intercept.value_or(o.family != Family::GaussianIdentity);
        o.standardize_response = standardize_response && o.family == Family::GaussianIdentity;
        return ingest(read_csv(path), o);
      },
      py::arg("path"), py::arg("response"), py::arg("family") = "gaussian",
      py::arg("predictors") = std::vector<std::string>{}, py::arg("interactions") = std::vector<std::string>{},
      py::arg("intercept") = py::none(), py::arg("standardize_response") = true);

  m.def("log_likelihood", &log_likelihood, py::arg("data"), py::arg("beta"));
  m.def("score", &score, py::arg("data"), py::arg("beta"));
  m.def("neg_hessian", &neg_hessian, py::arg("data"), py::arg("beta"));

  m.def(
      "fit_mle",
      [](const Dataset& d, std::optional<std::vector<std::string>> support, std::optional<double> lambda0) {
        const MleFit fit = fit_mle(d, names_to_support(d, support));
        const double l0 = lambda0.value_or(std::log(static_cast<double>(d.n())));
        return to_py(mle_block(d, fit, information_criterion(fit.loglik, static_cast<int>(fit.support.size()), l0)));
      },
      py::arg("data"), py::arg("support") = py::none(), py::arg("lambda0") = py::none());

  m.def("beta_of_gamma", py::vectorize(&beta_of_gamma), py::arg("gamma"), py::arg("a") = 10.0);
  m.def("gamma_of_beta", py::vectorize(&gamma_of_beta), py::arg("beta"), py::arg("a") = 10.0);

  py::class_<MicConfig>(m, "MicConfig")
      .def(py::init([](double a, std::optional<double> lambda0, std::uint64_t seed, bool penalize_intercept,
                       bool refit, int n_starts, long max_evals) {
             MicConfig c;
             c.a = a;
             c.lambda0 = lambda0;
             c.seed = seed;
             c.penalize_intercept = penalize_intercept;
             c.refit_on_support = refit;
             c.n_starts = n_starts;
             c.annealer.max_evals = max_evals;
             validate(c);
             return c;
           }),
           py::arg("a") = 10.0, py::arg("lambda0") = py::none(), py::arg("seed") = 0,
           py::arg("penalize_intercept") = true, py::arg("refit") = false, py::arg("n_starts") = 5,
           py::arg("max_evals") = 0)
      .def_readwrite("a", &MicConfig::a)
      .def_readwrite("lambda0", &MicConfig::lambda0)
      .def_readwrite("seed", &MicConfig::seed)
      .def_readwrite("penalize_intercept", &MicConfig::penalize_intercept)
      .def_readwrite("refit", &MicConfig::refit_on_support)
      .def_readwrite("n_starts", &MicConfig::n_starts)
      .def_readwrite("zero_threshold", &MicConfig::zero_threshold);

  py::class_<MicFit>(m, "MicFit")
      .def_readonly("gamma_raw", &MicFit::gamma_raw)
      .def_readonly("gamma", &MicFit::gamma_tilde)
      .def_readonly("beta", &MicFit::beta_tilde)
      .def_readonly("support", &MicFit::support)
      .def_readonly("objective", &MicFit::objective)
      .def_readonly("bic", &MicFit::bic_equivalent)
      .def_readonly("lambda0", &MicFit::lambda0)
      .def_readonly("a", &MicFit::a)
      .def_readonly("se_gamma", &MicFit::se_gamma)
      .def_readonly("p_values", &MicFit::p_values)
      .def_readonly("converged", &MicFit::converged)
      .def_readonly("refitted", &MicFit::refitted)
      .def_readonly("n_objective_evals", &MicFit::n_objective_evals)
      .def_readonly("warnings", &MicFit::warnings);

  m.def("mic_objective", &mic_objective, py::arg("data"), py::arg("gamma"), py::arg("config") = MicConfig{});
  m.def("mic_gradient", &mic_gradient, py::arg("data"), py::arg("gamma"), py::arg("config") = MicConfig{});
  m.def(
      "solve_mic",
      [](const Dataset& d, const MicConfig& cfg) {
        py::gil_scoped_release release;
        return solve_mic(d, cfg);
      },
      py::arg("data"), py::arg("config") = MicConfig{});
  m.def(
      "inference",
      [](const Dataset& d, const MicFit& fit, double alpha) {
        return to_py(mic_block(d, fit, make_inference_report(d, fit, alpha)));
      },
      py::arg("data"), py::arg("fit"), py::arg("alpha") = 0.05);

  m.def(
      "best_subset",
      [](const Dataset& d, std::optional<double> lambda0, int max_p, int threads) {
        SubsetSearchOptions o;
        o.max_p = max_p;
        o.threads = threads;
        const double l0 = lambda0.value_or(std::log(static_cast<double>(d.n())));
        SubsetSearchResult r;
        {
          py::gil_scoped_release release;
          r = best_subset(d, l0, o);
        }
        py::dict out = to_py(best_subset_block(d, r, l0)).cast<py::dict>();
        out["support_indices"] = r.best_support;
        return out;
      },
      py::arg("data"), py::arg("lambda0") = py::none(), py::arg("max_p") = 20, py::arg("threads") = 1);

  m.def(
      "simulate",
      [](const std::string& model, int n, int reps, std::uint64_t seed, std::vector<std::string> methods,
         int threads, double alpha, bool include_reps) {
        SimDesign d;
        d.model = parse_model(model);
        d.n = n;
        d.reps = reps;
        d.seed = seed;
        d.threads = threads;
        d.alpha = alpha;
        if (!methods.empty()) {
          d.methods.clear();
          for (const std::string& s : methods) d.methods.push_back(parse_method(s));
        }
        SimReport r;
        {
          py::gil_scoped_release release;
          r = run_simulation(d);
        }
        return to_py(simulation_json(r, include_reps));
      },
      py::arg("model") = "A", py::arg("n") = 200, py::arg("reps") = 100, py::arg("seed") = 0,
      py::arg("methods") = std::vector<std::string>{}, py::arg("threads") = 1, py::arg("alpha") = 0.05,
      py::arg("include_reps") = false);

  m.def(
      "sweep_a",
      [](const Dataset& d, std::vector<double> grid, const MicConfig& cfg) {
        if (grid.empty()) grid = default_a_grid();
        ARobustness r;
        {
          py::gil_scoped_release release;
          r = a_robustness_study(d, grid, cfg);
        }
        return to_py(sweep_json(d, r));
      },
      py::arg("data"), py::arg("grid") = std::vector<double>{}, py::arg("config") = MicConfig{});

  m.def("support_names", &support_names, py::arg("data"), py::arg("support"));
}
