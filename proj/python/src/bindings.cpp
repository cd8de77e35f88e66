#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ccnkit/cli.hpp"
#include "ccnkit/dependency.hpp"
#include "ccnkit/error.hpp"
#include "ccnkit/estimators.hpp"
#include "ccnkit/metrics.hpp"
#include "ccnkit/persist.hpp"
#include "ccnkit/simgen.hpp"
#include "ccnkit/tuning.hpp"
#include "ccnkit/version.hpp"

namespace py = pybind11;
using namespace ccn;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a, const char* what) {
  if (a.ndim() != 2) throw ValidationError(std::string(what) + " must be a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return Matrix::from_data(rows, cols, Vector(a.data(), a.data() + rows * cols));
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Array to_array(const Vector& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

LabelOrder to_order(const py::object& order) {
  if (py::isinstance<py::str>(order)) {
    const auto s = order.cast<std::string>();
    if (s == "given") return LabelOrder::given();
    if (s == "entropy") return LabelOrder::entropy();
    if (s == "reversed") return LabelOrder::reversed();
    throw ValidationError("order must be 'given', 'entropy', 'reversed' or a permutation");
  }
  return LabelOrder::explicit_order(order.cast<Permutation>());
}

FitConfig make_config(const std::string& loss, double q, double lam, double xi_plus, double xi_minus, double kappa,
                      std::size_t starts, bool informed, std::uint64_t seed, const py::object& order, bool freeze_c) {
  FitConfig cfg;
  cfg.loss_spec.kind = parse_loss_kind(loss);
  cfg.loss_spec.q = q;
  cfg.loss_spec.lambda = lam;
  cfg.loss_spec.xi_plus = xi_plus;
  cfg.loss_spec.xi_minus = xi_minus;
  cfg.loss_spec.kappa = kappa;
  cfg.activation = cfg.loss_spec.natural_activation();
  cfg.n_random_starts = starts;
  cfg.use_informed_init = informed;
  cfg.seed = seed;
  cfg.label_order = to_order(order);
  if (freeze_c) cfg.dependencies = Dependencies::frozen;
  return cfg;
}

py::dict cdep_dict(const CdepResult& r) {
  py::dict d;
  d["score"] = r.score;
  d["raw_difference"] = r.raw_difference;
  d["performance_without"] = r.performance_without;
  d["performance_with"] = r.performance_with;
  d["fallbacks"] = r.fallbacks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ccn, m) {
  m.doc() = "Classifier chain networks for multi-label classification";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<FittedModel>(m, "Model")
      .def("predict_proba", [](const FittedModel& f, const Array& x) { return to_array(f.predict_proba(to_matrix(x, "X"))); },
           py::arg("X"))
      .def("predict", [](const FittedModel& f, const Array& x) { return to_array(f.predict(to_matrix(x, "X"))); },
           py::arg("X"))
      .def_property_readonly("b", [](const FittedModel& f) { return to_array(f.params.b); })
      .def_property_readonly("W", [](const FittedModel& f) { return to_array(f.params.W); })
      .def_property_readonly("C", [](const FittedModel& f) { return to_array(f.params.C); })
      .def_readonly("label_order", &FittedModel::label_order)
      .def_readonly("training_loss", &FittedModel::training_loss)
      .def_readonly("n_starts_used", &FittedModel::n_starts_used)
      .def_property_readonly("q", [](const FittedModel& f) { return f.loss_spec.q; })
      .def_property_readonly("lam", [](const FittedModel& f) { return f.loss_spec.lambda; })
      .def("to_json", [](const FittedModel& f) { return model_to_json(f).dump(); })
      .def_static("from_json", [](const std::string& s) { return model_from_json(nlohmann::json::parse(s)); })
      .def("save", [](const FittedModel& f, const std::filesystem::path& p) { save_model(p, f); })
      .def_static("load", &load_model);

  m.def("builtin_designs", &builtin_design_names);

  m.def(
      "simulate",
      [](const std::string& design, std::optional<std::size_t> n, std::uint64_t seed) {
        Rng rng(seed);
        const SimDesign d = builtin_design(design);
        const Simulation sim = generate(d, n.value_or(d.n), rng);
        return py::make_tuple(to_array(sim.data.X), to_array(sim.data.Y), to_array(sim.latent_p));
      },
      py::arg("design"), py::arg("n") = py::none(), py::arg("seed") = 0,
      "Draw (X, Y, latent_p) from a built-in design; matches `ccn simulate` for the same seed.");

  m.def(
      "fit",
      [](const Array& x, const Array& y, const std::string& method, const std::string& loss, double q, double lam,
         double xi_plus, double xi_minus, double kappa, std::size_t starts, bool informed, std::uint64_t seed,
         const py::object& order, bool freeze_c) {
        const Dataset data{to_matrix(x, "X"), to_matrix(y, "Y")};
        const EstimatorKind kind = parse_estimator(method);
        if (freeze_c && kind != EstimatorKind::ccn) throw ValidationError("freeze_c applies to method 'ccn' only");
        const FitConfig cfg = make_config(loss, q, lam, xi_plus, xi_minus, kappa, starts, informed, seed, order, freeze_c);
        py::gil_scoped_release release;
        return fit_estimator(kind, data, cfg);
      },
      py::arg("X"), py::arg("Y"), py::arg("method") = "ccn", py::arg("loss") = "bce", py::arg("q") = 1.0,
      py::arg("lam") = 0.01, py::arg("xi_plus") = 0.0, py::arg("xi_minus") = 0.0, py::arg("kappa") = 0.0,
      py::arg("starts") = 10, py::arg("informed") = true, py::arg("seed") = 0, py::arg("order") = "given",
      py::arg("freeze_c") = false);

  m.def(
      "grid_search",
      [](const Array& x, const Array& y, const std::string& method, std::vector<double> q_values,
         std::vector<double> lambda_values, std::size_t folds, const std::string& scoring, std::size_t starts,
         std::uint64_t seed) {
        const Dataset data{to_matrix(x, "X"), to_matrix(y, "Y")};
        GridSpec grid;
        grid.q_values = std::move(q_values);
        grid.lambda_values = std::move(lambda_values);
        grid.k_folds = folds;
        grid.scoring = parse_metric(scoring);
        grid.seed = derive_seed(seed, 1);
        FitConfig cfg;
        cfg.n_random_starts = starts;
        cfg.seed = seed;
        GridSearchResult r;
        {
          py::gil_scoped_release release;
          r = grid_search(data, parse_estimator(method), grid, cfg);
        }
        py::list table;
        for (const auto& p : r.table.points) {
          py::dict row;
          row["q"] = p.q;
          row["lam"] = p.lambda;
          row["failed"] = p.failed;
          for (MetricKind k : kAllMetrics) row[py::str(std::string(to_string(k)))] = p.mean(k);
          table.append(row);
        }
        py::dict out;
        out["q"] = r.best_q;
        out["lam"] = r.best_lambda;
        out["score"] = r.best_score;
        out["table"] = table;
        return out;
      },
      py::arg("X"), py::arg("Y"), py::arg("method") = "ccn",
      py::arg("q_values") = std::vector<double>{1.0, 1.5, 2.0, 3.0, 5.0},
      py::arg("lambda_values") = std::vector<double>{0.0001, 0.001, 0.01, 0.05, 0.1, 0.25}, py::arg("folds") = 5,
      py::arg("scoring") = "hamming", py::arg("starts") = 10, py::arg("seed") = 0,
      "Cross-validated grid search; the fold split uses the same seed derivation as `ccn fit --tune`.");

  m.def(
      "score",
      [](const std::string& metric, const Array& y, const Array& p) {
        return score(parse_metric(metric), to_matrix(y, "Y"), to_matrix(p, "P"));
      },
      py::arg("metric"), py::arg("Y"), py::arg("P"),
      "Metric from probabilities; hard labels threshold P at 0.5.");

  m.def("label_density", [](const Array& y) { return label_density(to_matrix(y, "Y")); }, py::arg("Y"));
  m.def("label_dependency", [](const Array& y) { return label_dependency(to_matrix(y, "Y")); }, py::arg("Y"));
  m.def(
      "unconditional_dependency",
      [](const Array& y, double alpha) { return unconditional_dependency(to_matrix(y, "Y"), alpha); }, py::arg("Y"),
      py::arg("alpha") = 0.01);
  m.def(
      "conditional_dependency",
      [](const Array& x, const Array& y, const std::string& metric, std::size_t outer, std::size_t inner,
         std::uint64_t seed) {
        const Dataset data{to_matrix(x, "X"), to_matrix(y, "Y")};
        CdepConfig cfg;
        cfg.metric = parse_metric(metric);
        cfg.outer_folds = outer;
        cfg.inner_folds = inner;
        cfg.seed = seed;
        CdepResult r;
        {
          py::gil_scoped_release release;
          r = conditional_dependency(data, cfg);
        }
        return cdep_dict(r);
      },
      py::arg("X"), py::arg("Y"), py::arg("metric") = "hamming", py::arg("outer_folds") = 10,
      py::arg("inner_folds") = 5, py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return run_cli(args);
      },
      py::arg("args"), "Run the command-line tool in-process and return its exit code.");
}
