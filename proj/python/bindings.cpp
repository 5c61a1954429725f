#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>

#include "rwppt/empirical.hpp"
#include "rwppt/error.hpp"
#include "rwppt/experiment.hpp"
#include "rwppt/marginals.hpp"
#include "rwppt/schedule.hpp"
#include "rwppt/target.hpp"
#include "rwppt/theory.hpp"

namespace py = pybind11;
using namespace rwppt;

namespace {

EstimatorOptions options(unsigned threads) {
  EstimatorOptions o;
  o.threads = threads;
  return o;
}

py::dict plan_dict(const LadderPlan& plan) {
  py::list pairs;
  for (const auto& p : plan.pairs) {
    pairs.append(py::make_tuple(p.ell_used, p.predicted_acceptance));
  }
  const auto b = plan.ladder.betas();
  py::dict out;
  out["betas"] = std::vector<double>(b.begin(), b.end());
  out["pairs"] = pairs;
  out["ratio"] = plan.ratio;
  out["clamped_final"] = plan.clamped_final;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tempering theory and swap-acceptance estimators for regional targets.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<OptimizerConfigurationError>(m, "OptimizerConfigurationError",
                                                      PyExc_RuntimeError);
  py::register_exception<ModelMismatchError>(m, "ModelMismatchError", PyExc_RuntimeError);

  py::class_<MarginalFamily>(m, "MarginalFamily")
      .def_static("exp_power", &MarginalFamily::exp_power, py::arg("z"), py::arg("sigma") = 1.0)
      .def_static("tabulated", &MarginalFamily::tabulated, py::arg("grid"), py::arg("log_values"))
      .def("log_density", &MarginalFamily::log_density);

  py::class_<Region>(m, "Region")
      .def(py::init([](std::vector<double> center, double h, double w, MarginalFamily f) {
             return Region{std::move(center), h, w, std::move(f)};
           }),
           py::arg("center"), py::arg("half_width"), py::arg("weight"), py::arg("family"))
      .def_readonly("center", &Region::center)
      .def_readonly("half_width", &Region::half_width)
      .def_readonly("weight", &Region::weight);

  py::class_<TargetModel>(m, "TargetModel")
      .def(py::init<std::size_t, std::vector<Region>>(), py::arg("dimension"), py::arg("regions"))
      .def_property_readonly("dimension", &TargetModel::dimension)
      .def("__len__", &TargetModel::size)
      .def("region_of", [](const TargetModel& model, const std::vector<double>& x) {
        return model.region_of(x);
      });

  py::class_<TemperedCumulants>(m, "TemperedCumulants")
      .def_readonly("beta", &TemperedCumulants::beta)
      .def_readonly("log_C", &TemperedCumulants::log_C)
      .def_readonly("M", &TemperedCumulants::M)
      .def_readonly("I", &TemperedCumulants::I)
      .def_readonly("J", &TemperedCumulants::J);
  m.def("cumulants",
        [](const MarginalFamily& f, double h, double beta) { return cumulants(f, h, beta); },
        py::arg("family"), py::arg("half_width"), py::arg("beta"));

  py::class_<InformationProfile>(m, "InformationProfile")
      .def(py::init([](std::vector<double> w, std::vector<double> info) {
             return InformationProfile{std::move(w), std::move(info)};
           }),
           py::arg("weights"), py::arg("info"))
      .def_readonly("weights", &InformationProfile::weights)
      .def_readonly("info", &InformationProfile::info);
  m.def("information_profile", &information_profile, py::arg("model"), py::arg("beta"));
  m.def("limiting_acceptance",
        py::overload_cast<const InformationProfile&, double>(&limiting_acceptance));
  m.def("limiting_esjd", py::overload_cast<const InformationProfile&, double>(&limiting_esjd));
  m.def("optimize_ell", [](const InformationProfile& p) {
    const auto o = optimize_ell(p);
    return py::make_tuple(o.ell_hat, o.a_hat);
  });
  m.def("mhat_root", [] {
    const auto r = mhat_root();
    return py::make_tuple(r.m_hat, r.value);
  });
  m.def("h_fun", &h_fun);
  m.def("figure_curve", [](const std::vector<double>& grid) { return figure_curve(grid); });

  m.def("geometric_ladder", [](const TargetModel& model, double beta_min, std::size_t d) {
    return plan_dict(geometric_ladder(model, beta_min, d));
  });
  m.def("optimal_ladder", [](const TargetModel& model, double beta_min, std::size_t d) {
    return plan_dict(optimal_ladder(model, beta_min, d));
  });
  m.def("next_optimal_rung", &next_optimal_rung, py::arg("model"), py::arg("beta"),
        py::arg("beta_min"), py::arg("d"));

  m.def(
      "estimate_acceptance",
      [](const TargetModel& model, double beta, double ell, std::uint64_t n, std::uint64_t seed,
         unsigned threads) {
        py::gil_scoped_release release;
        const auto e = estimate_acceptance(model, beta, ell, n, Seed(seed), options(threads));
        return std::make_tuple(e.mean, e.std_error);
      },
      py::arg("model"), py::arg("beta"), py::arg("ell"), py::arg("n_samples"), py::arg("seed"),
      py::arg("threads") = 1);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("dimension", &ExperimentConfig::dimension)
      .def_readonly("seed", &ExperimentConfig::seed)
      .def("model", &ExperimentConfig::model);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("theory_curve_csv", &theory_curve_csv);
  m.def("optimize_json", &optimize_json);
  m.def("ladder_csv", &ladder_csv);
  m.def("figure_csv", &figure_csv);
  m.def("simulate_csv", &simulate_csv, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("convergence_csv", &convergence_csv, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
}
