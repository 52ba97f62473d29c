// Copyright 2026 The qfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfilter/cli/commands.hpp"
#include "qfilter/oracle.hpp"
#include "qfilter/photon_box.hpp"
#include "qfilter/stats.hpp"

namespace py = pybind11;
using namespace qfilter;

namespace {

DensityOperator density(const ComplexMatrix& m) { return validate_density(m); }

MeasurementStep make_step(std::vector<ComplexMatrix> ops, const RealMatrix& eta,
                          double completeness_tolerance, std::vector<std::string> labels) {
  return MeasurementStep(KrausFamily(std::move(ops), completeness_tolerance, std::move(labels)),
                         ErrorModel::validate(eta));
}

photonbox::PhotonBoxParams params_from(const py::dict& d) {
  return io::photon_box_params_from_json(io::Json::parse(py::str(py::module_::import("json").attr("dumps")(d)).cast<std::string>()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum filtering with imperfect measurements";

  static py::exception<Error> error(m, "QFilterError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(std::string(to_string(e.kind())),
                                                  e.message(), e.magnitude())
                                       .ptr());
    }
  });

  py::class_<MeasurementStep>(m, "MeasurementStep")
      .def(py::init(&make_step), py::arg("operators"), py::arg("eta"),
           py::arg("completeness_tolerance") = kDefaultCompletenessTolerance,
           py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("dim", &MeasurementStep::dim)
      .def_property_readonly("m_ideal", &MeasurementStep::m_ideal)
      .def_property_readonly("m_real", &MeasurementStep::m_real)
      .def_property_readonly("operators",
                             [](const MeasurementStep& s) { return s.family().operators(); })
      .def_property_readonly("labels", [](const MeasurementStep& s) { return s.family().labels(); })
      .def_property_readonly("eta", [](const MeasurementStep& s) { return s.errors().matrix(); });

  m.def("validate_density", [](const ComplexMatrix& x) { return density(x).matrix(); },
        py::arg("rho"));
  m.def("fidelity",
        [](const ComplexMatrix& a, const ComplexMatrix& b) { return fidelity(density(a), density(b)); },
        py::arg("rho"), py::arg("sigma"));

  m.def(
      "outcome_probabilities",
      [](const ComplexMatrix& rho, const MeasurementStep& step) {
        return outcome_probabilities(density(rho), step);
      },
      py::arg("rho"), py::arg("step"));
  m.def(
      "filter_update",
      [](const ComplexMatrix& rho, const MeasurementStep& step, std::size_t p) {
        const FilterState s = filter_update(FilterState(density(rho)), step, p);
        return py::make_tuple(s.estimate.matrix(), s.last_regularized);
      },
      py::arg("rho"), py::arg("step"), py::arg("outcome"),
      "Returns (next estimate, regularized flag).");
  m.def(
      "run_filter",
      [](const ComplexMatrix& rho, const std::vector<MeasurementStep>& steps,
         const std::vector<std::size_t>& outcomes) {
        std::vector<ComplexMatrix> out;
        for (const FilterState& s : run_filter(density(rho), steps, outcomes))
          out.push_back(s.estimate.matrix());
        return out;
      },
      py::arg("rho"), py::arg("steps"), py::arg("outcomes"));

  m.def(
      "direct_estimate",
      [](const ComplexMatrix& rho, const std::vector<MeasurementStep>& steps,
         const std::vector<std::size_t>& outcomes) {
        return direct_estimate(density(rho), steps, outcomes).matrix();
      },
      py::arg("rho"), py::arg("steps"), py::arg("outcomes"));
  m.def(
      "marginal_evidence",
      [](const ComplexMatrix& rho, const std::vector<MeasurementStep>& steps,
         const std::vector<std::size_t>& outcomes) {
        return marginal_evidence(density(rho), steps, outcomes);
      },
      py::arg("rho"), py::arg("steps"), py::arg("outcomes"));

  m.def(
      "exact_one_step_submartingale",
      [](const ComplexMatrix& rho_hat, const ComplexMatrix& rho_e, const MeasurementStep& step) {
        const OneStepCheck c = exact_one_step_submartingale(density(rho_hat), density(rho_e), step);
        return py::dict(py::arg("lhs") = c.lhs, py::arg("rhs") = c.rhs,
                        py::arg("slack") = c.slack, py::arg("holds") = c.holds);
      },
      py::arg("rho_hat"), py::arg("rho_e"), py::arg("step"));

  py::module_ pb = m.def_submodule("photonbox", "Photon-box model");
  pb.def("displacement", &photonbox::displacement, py::arg("alpha"), py::arg("n_max"));
  pb.def(
      "coherent_state",
      [](Complex beta, int n_max) { return photonbox::coherent_state(beta, n_max).matrix(); },
      py::arg("beta"), py::arg("n_max"));
  pb.def(
      "step",
      [](const py::dict& params, Complex alpha) {
        return photonbox::make_step(params_from(params), alpha);
      },
      py::arg("params") = py::dict(), py::arg("alpha") = Complex(0.0, 0.0));
  pb.def(
      "table1",
      [](const py::dict& params) {
        return photonbox::table1_error_model(params_from(params)).matrix();
      },
      py::arg("params") = py::dict());

  m.def(
      "verify_config",
      [](const std::string& path, std::vector<std::string> checks) {
        const cli::ExperimentConfig c = cli::load_config(path);
        if (checks.empty()) checks = cli::default_verify_checks();
        return cli::verify(c, checks).to_json().dump();
      },
      py::arg("path"), py::arg("checks") = std::vector<std::string>{},
      "Runs verification checks on a config file; returns the JSON report.");
  m.def(
      "simulate_config",
      [](const std::string& path, std::size_t n_traj) {
        cli::ExperimentConfig c = cli::load_config(path);
        if (n_traj > 0) c.n_traj = n_traj;
        return cli::simulate(c).summary.dump();
      },
      py::arg("path"), py::arg("n_traj") = 0,
      "Simulates the configured ensemble; returns the JSON summary.");
}
