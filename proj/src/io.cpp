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

#include "qfilter/io.hpp"

namespace qfilter::io {

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

Index dimension(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    schema_error(child(path, key), "expected a positive integer");
  }
  return static_cast<Index>(v.get<long long>());
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

Json vector_to_json(const std::vector<double>& v) { return Json(v); }

}  // namespace

void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Schema, (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(child(path, key), "missing required field");
  return *it;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    schema_error(path, "expected a [re, im] pair");
  }
  return {number(j[0], child(path, 0)), number(j[1], child(path, 1))};
}

Json to_json(const ComplexMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) data.push_back(complex_to_json(m(r, c)));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ComplexMatrix complex_matrix_from_json(const Json& j, const std::string& path) {
  const Index rows = dimension(j, "rows", path);
  const Index cols = dimension(j, "cols", path);
  const Json& data = require(j, "data", path);
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
    schema_error(child(path, "data"),
                 "expected " + std::to_string(rows * cols) + " [re, im] entries");
  }
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      m(r, c) = complex_from_json(data[i], child(child(path, "data"), i));
    }
  }
  return m;
}

Json to_json(const RealMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

RealMatrix real_matrix_from_json(const Json& j, const std::string& path) {
  const Index rows = dimension(j, "rows", path);
  const Index cols = dimension(j, "cols", path);
  const Json& data = require(j, "data", path);
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
    schema_error(child(path, "data"),
                 "expected " + std::to_string(rows * cols) + " numbers");
  }
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      m(r, c) = number(data[i], child(child(path, "data"), i));
    }
  }
  return m;
}

Json to_json(const KrausFamily& family) {
  Json ops = Json::array();
  for (std::size_t q = 0; q < family.size(); ++q) {
    ops.push_back(Json{{"label", family.label(q)}, {"matrix", to_json(family.op(q))}});
  }
  return Json{{"completeness_tolerance", family.completeness_tolerance()},
              {"operators", std::move(ops)}};
}

KrausFamily kraus_family_from_json(const Json& j, const std::string& path) {
  double tol = kDefaultCompletenessTolerance;
  if (j.is_object() && j.contains("completeness_tolerance")) {
    tol = number(j["completeness_tolerance"], child(path, "completeness_tolerance"));
  }
  const Json& ops = require(j, "operators", path);
  if (!ops.is_array() || ops.empty()) {
    schema_error(child(path, "operators"), "expected a non-empty array");
  }
  std::vector<ComplexMatrix> mats;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string p = child(child(path, "operators"), i);
    mats.push_back(complex_matrix_from_json(require(ops[i], "matrix", p), child(p, "matrix")));
    if (ops[i].contains("label")) {
      if (!ops[i]["label"].is_string()) schema_error(child(p, "label"), "expected a string");
      labels.push_back(ops[i]["label"].get<std::string>());
    } else {
      labels.push_back(std::to_string(i));
    }
  }
  return KrausFamily(std::move(mats), tol, std::move(labels));
}

Json to_json(const ErrorModel& model) { return to_json(model.matrix()); }

ErrorModel error_model_from_json(const Json& j, const std::string& path) {
  return ErrorModel::validate(real_matrix_from_json(j, path));
}

Json to_json(const photonbox::PhotonBoxParams& p) {
  return Json{{"n_max", p.n_max},
              {"atom_count", Json::array({p.atom_count[0], p.atom_count[1], p.atom_count[2]})},
              {"detection_efficiency", p.detection_efficiency},
              {"eta_g", p.eta_g},
              {"eta_e", p.eta_e},
              {"epsilon", p.epsilon},
              {"n_th", p.n_th},
              {"phi0", p.phi0},
              {"phi_r", p.phi_r}};
}

photonbox::PhotonBoxParams photon_box_params_from_json(const Json& j,
                                                       const std::string& path) {
  photonbox::PhotonBoxParams p;
  if (!j.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string kp = child(path, key);
    if (key == "n_max") {
      if (!value.is_number_integer()) schema_error(kp, "expected an integer");
      p.n_max = value.get<int>();
    } else if (key == "atom_count") {
      if (!value.is_array() || value.size() != 3) {
        schema_error(kp, "expected [P_a(0), P_a(1), P_a(2)]");
      }
      for (std::size_t i = 0; i < 3; ++i) p.atom_count[i] = number(value[i], child(kp, i));
    } else if (key == "detection_efficiency") {
      p.detection_efficiency = number(value, kp);
    } else if (key == "eta_g") {
      p.eta_g = number(value, kp);
    } else if (key == "eta_e") {
      p.eta_e = number(value, kp);
    } else if (key == "epsilon") {
      p.epsilon = number(value, kp);
    } else if (key == "n_th") {
      p.n_th = number(value, kp);
    } else if (key == "phi0") {
      p.phi0 = number(value, kp);
    } else if (key == "phi_r") {
      p.phi_r = number(value, kp);
    } else {
      schema_error(kp, "unknown photon-box parameter");
    }
  }
  return p;
}

std::string to_string(OutcomeFeed feed) {
  return feed == OutcomeFeed::Truth ? "truth" : "shuffled";
}

OutcomeFeed outcome_feed_from_string(const std::string& s, const std::string& path) {
  if (s == "truth") return OutcomeFeed::Truth;
  if (s == "shuffled") return OutcomeFeed::Shuffled;
  schema_error(path, "feed must be \"truth\" or \"shuffled\"");
}

Json to_json(const TrajectoryRecord& r) {
  Json filters = Json::array();
  for (std::size_t i = 0; i < r.filter_names.size(); ++i) {
    filters.push_back(Json{{"name", r.filter_names[i]},
                           {"feed", to_string(r.feeds[i])},
                           {"initialized_at_truth", r.initialized_at_truth[i] != 0}});
  }
  Json pairs = Json::array();
  for (const FidelityPair& p : r.pairs) pairs.push_back(Json::array({p.first, p.second}));
  Json steps = Json::array();
  for (const StepRecord& s : r.steps) {
    Json js{{"k", s.k}, {"ideal", s.ideal}, {"real", s.real}};
    if (!s.predicted.empty()) js["predicted"] = vector_to_json(s.predicted);
    js["fidelities"] = vector_to_json(s.fidelities);
    if (!s.exact_increments.empty()) js["exact_increments"] = vector_to_json(s.exact_increments);
    Json reg = Json::array();
    for (auto f : s.regularized) reg.push_back(f != 0);
    js["regularized"] = std::move(reg);
    if (s.truth) js["truth"] = to_json(s.truth->matrix());
    if (!s.estimates.empty()) {
      Json est = Json::array();
      for (const DensityOperator& e : s.estimates) est.push_back(to_json(e.matrix()));
      js["estimates"] = std::move(est);
    }
    steps.push_back(std::move(js));
  }
  return Json{{"seed", r.seed},
              {"filters", std::move(filters)},
              {"pairs", std::move(pairs)},
              {"initial_fidelities", vector_to_json(r.initial_fidelities)},
              {"steps", std::move(steps)}};
}

Json to_json(const SubmartingaleReport& r) {
  Json steps = Json::array();
  for (const StepStatistics& s : r.steps) {
    steps.push_back(Json{{"k", s.k},
                         {"count", s.count},
                         {"mean_fidelity", s.mean_fidelity},
                         {"se_fidelity", s.se_fidelity},
                         {"mean_increment", s.mean_increment},
                         {"se_increment", s.se_increment},
                         {"decrease_fraction", s.decrease_fraction},
                         {"mean_exact_increment", s.mean_exact_increment},
                         {"passes", s.passes}});
  }
  return Json{{"n_traj", r.n_traj},
              {"pair", r.pair},
              {"asserted", r.asserted},
              {"note", r.note},
              {"passes", r.passes},
              {"final_exceeds_initial", r.final_exceeds_initial},
              {"headline_mean_increment", r.headline_mean},
              {"headline_se", r.headline_se},
              {"exact_checks", r.exact_checks},
              {"exact_violations", r.exact_violations},
              {"mean_fidelity", vector_to_json(r.mean_fidelity)},
              {"se_fidelity", vector_to_json(r.se_fidelity)},
              {"steps", std::move(steps)}};
}

Json to_json(const InequalityCheck& c) {
  return Json{{"dim", c.dim},
              {"partition", c.partition},
              {"lhs", c.lhs},
              {"rhs", c.rhs},
              {"slack", c.slack},
              {"weights", c.weights},
              {"part_fidelities", c.part_fidelities},
              {"regularized_parts", c.regularized_parts}};
}

Json to_json(const OneStepCheck& c) {
  return Json{{"lhs", c.lhs},
              {"rhs", c.rhs},
              {"slack", c.slack},
              {"holds", c.holds},
              {"regularized_outcomes", c.regularized_outcomes}};
}

}  // namespace qfilter::io
