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

#include "qfilter/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qfilter::cli {

using io::Json;
using io::require;
using io::schema_error;

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

bool same(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same(const RealMatrix& a, const RealMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

template <typename T>
bool same_list(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same(a[i], b[i])) return false;
  }
  return true;
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      schema_error(child(path, key), "unknown field");
    }
  }
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) schema_error(path, "expected a string");
  return v.get<std::string>();
}

std::uint64_t get_unsigned(const Json& v, const std::string& path) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    schema_error(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) schema_error(path, "expected true or false");
  return v.get<bool>();
}

double get_number(const Json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

std::string kind_name(StateSpec::Kind k) {
  switch (k) {
    case StateSpec::Kind::Truth: return "truth";
    case StateSpec::Kind::Matrix: return "matrix";
    case StateSpec::Kind::MaximallyMixed: return "maximally_mixed";
    case StateSpec::Kind::Basis: return "basis";
    case StateSpec::Kind::Coherent: return "coherent";
  }
  return "";
}

StateSpec parse_state(const Json& j, const std::string& path, bool allow_truth) {
  StateSpec s;
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else {
    check_keys(j, path, {"kind", "matrix", "index", "alpha"});
    kind = get_string(require(j, "kind", path), child(path, "kind"));
  }
  if (kind == "truth") {
    if (!allow_truth) schema_error(path, "\"truth\" is only valid for filter initials");
    s.kind = StateSpec::Kind::Truth;
  } else if (kind == "maximally_mixed") {
    s.kind = StateSpec::Kind::MaximallyMixed;
  } else if (kind == "matrix") {
    s.kind = StateSpec::Kind::Matrix;
    if (!j.is_object()) schema_error(path, "matrix state needs a \"matrix\" field");
    s.matrix = io::complex_matrix_from_json(require(j, "matrix", path), child(path, "matrix"));
  } else if (kind == "basis") {
    s.kind = StateSpec::Kind::Basis;
    if (!j.is_object()) schema_error(path, "basis state needs an \"index\" field");
    s.index = static_cast<Index>(get_unsigned(require(j, "index", path), child(path, "index")));
  } else if (kind == "coherent") {
    s.kind = StateSpec::Kind::Coherent;
    if (!j.is_object()) schema_error(path, "coherent state needs an \"alpha\" field");
    s.alpha = io::complex_from_json(require(j, "alpha", path), child(path, "alpha"));
  } else {
    schema_error(path, "unknown state kind \"" + kind + "\"");
  }
  return s;
}

StepSpec parse_step(const Json& j, const std::string& path) {
  check_keys(j, path, {"label", "kraus", "eta"});
  StepSpec s;
  if (j.contains("label")) s.label = get_string(j["label"], child(path, "label"));
  const std::string kp = child(path, "kraus");
  const Json& kraus = require(j, "kraus", path);
  check_keys(kraus, kp, {"completeness_tolerance", "operators"});
  if (kraus.contains("completeness_tolerance")) {
    s.completeness_tolerance = get_number(kraus["completeness_tolerance"],
                                          child(kp, "completeness_tolerance"));
    if (!(s.completeness_tolerance > 0.0)) {
      schema_error(child(kp, "completeness_tolerance"), "must be positive");
    }
  }
  const Json& ops = require(kraus, "operators", kp);
  const std::string op_path = child(kp, "operators");
  if (!ops.is_array() || ops.empty()) schema_error(op_path, "expected a non-empty array");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string p = child(op_path, i);
    check_keys(ops[i], p, {"label", "matrix"});
    s.operators.push_back(
        io::complex_matrix_from_json(require(ops[i], "matrix", p), child(p, "matrix")));
    s.operator_labels.push_back(ops[i].contains("label")
                                    ? get_string(ops[i]["label"], child(p, "label"))
                                    : std::to_string(i));
  }
  s.eta = io::real_matrix_from_json(require(j, "eta", path), child(path, "eta"));
  return s;
}

Json step_to_json(const StepSpec& s) {
  Json ops = Json::array();
  for (std::size_t i = 0; i < s.operators.size(); ++i) {
    ops.push_back(Json{{"label", s.operator_labels[i]},
                       {"matrix", io::to_json(s.operators[i])}});
  }
  return Json{{"label", s.label},
              {"kraus", Json{{"completeness_tolerance", s.completeness_tolerance},
                             {"operators", std::move(ops)}}},
              {"eta", io::to_json(s.eta)}};
}

ModelSpec parse_model(const Json& j, const std::string& path) {
  ModelSpec m;
  const std::string type = get_string(require(j, "type", path), child(path, "type"));
  if (type == "generic") {
    check_keys(j, path, {"type", "steps"});
    m.kind = ModelSpec::Kind::Generic;
    const Json& steps = require(j, "steps", path);
    if (!steps.is_array() || steps.empty()) {
      schema_error(child(path, "steps"), "expected a non-empty array");
    }
    for (std::size_t i = 0; i < steps.size(); ++i) {
      m.steps.push_back(parse_step(steps[i], child(child(path, "steps"), i)));
    }
  } else if (type == "photon_box") {
    check_keys(j, path, {"type", "params", "alpha"});
    m.kind = ModelSpec::Kind::PhotonBox;
    if (j.contains("params")) {
      m.photon_box = io::photon_box_params_from_json(j["params"], child(path, "params"));
    }
    if (j.contains("alpha")) {
      const Json& a = j["alpha"];
      const std::string ap = child(path, "alpha");
      if (!a.is_array()) schema_error(ap, "expected an array of [re, im] pairs");
      for (std::size_t i = 0; i < a.size(); ++i) {
        m.alpha.push_back(io::complex_from_json(a[i], child(ap, i)));
      }
    }
  } else {
    schema_error(child(path, "type"), "model type must be \"generic\" or \"photon_box\"");
  }
  return m;
}

Json model_to_json(const ModelSpec& m) {
  if (m.kind == ModelSpec::Kind::Generic) {
    Json steps = Json::array();
    for (const StepSpec& s : m.steps) steps.push_back(step_to_json(s));
    return Json{{"type", "generic"}, {"steps", std::move(steps)}};
  }
  Json alpha = Json::array();
  for (Complex a : m.alpha) alpha.push_back(io::complex_to_json(a));
  return Json{{"type", "photon_box"},
              {"params", io::to_json(m.photon_box)},
              {"alpha", std::move(alpha)}};
}

void check_state_dims(const StateSpec& s, const ExperimentConfig& c,
                      const std::string& path) {
  const Index d = c.dim();
  switch (s.kind) {
    case StateSpec::Kind::Matrix:
      if (s.matrix.rows() != d || s.matrix.cols() != d) {
        schema_error(child(path, "matrix"), "expected a " + std::to_string(d) + "x" +
                                                std::to_string(d) + " matrix");
      }
      break;
    case StateSpec::Kind::Basis:
      if (s.index >= d) {
        schema_error(child(path, "index"),
                     "index out of range for dimension " + std::to_string(d));
      }
      break;
    case StateSpec::Kind::Coherent:
      if (c.model.kind != ModelSpec::Kind::PhotonBox) {
        schema_error(path, "coherent states need a photon_box model");
      }
      break;
    default:
      break;
  }
}

void check_consistency(const ExperimentConfig& c) {
  if (c.horizon == 0) schema_error("/horizon", "must be at least 1");
  if (c.n_traj == 0) schema_error("/n_traj", "must be at least 1");
  if (c.model.kind == ModelSpec::Kind::Generic) {
    const Index d = c.model.steps.front().operators.front().rows();
    for (std::size_t k = 0; k < c.model.steps.size(); ++k) {
      const StepSpec& s = c.model.steps[k];
      const std::string sp = "/model/steps/" + std::to_string(k);
      for (std::size_t i = 0; i < s.operators.size(); ++i) {
        if (s.operators[i].rows() != d || s.operators[i].cols() != d) {
          schema_error(sp + "/kraus/operators/" + std::to_string(i) + "/matrix",
                       "expected a " + std::to_string(d) + "x" + std::to_string(d) +
                           " operator");
        }
      }
      if (s.eta.cols() != static_cast<Index>(s.operators.size())) {
        schema_error(sp + "/eta", "needs one column per Kraus operator (" +
                                      std::to_string(s.operators.size()) + ")");
      }
    }
    if (c.model.steps.size() != 1 && c.model.steps.size() != c.horizon) {
      schema_error("/model/steps", "expected 1 step or one per horizon step (" +
                                       std::to_string(c.horizon) + ")");
    }
  } else {
    if (c.model.photon_box.n_max < 1) schema_error("/model/params/n_max", "must be >= 1");
    const std::size_t n = c.model.alpha.size();
    if (n > 1 && n != c.horizon) {
      schema_error("/model/alpha", "expected 0, 1 or " + std::to_string(c.horizon) +
                                       " control values");
    }
  }
  check_state_dims(c.true_initial, c, "/true_initial");
  std::set<std::string> names;
  for (std::size_t i = 0; i < c.filters.size(); ++i) {
    const std::string fp = "/filters/" + std::to_string(i);
    if (c.filters[i].name.empty()) schema_error(fp + "/name", "must not be empty");
    if (!names.insert(c.filters[i].name).second) {
      schema_error(fp + "/name", "duplicate filter name \"" + c.filters[i].name + "\"");
    }
    check_state_dims(c.filters[i].initial, c, fp + "/initial");
  }
  for (std::size_t i = 0; i < c.fidelity_pairs.size(); ++i) {
    for (const std::string* n : {&c.fidelity_pairs[i].first, &c.fidelity_pairs[i].second}) {
      if (!names.count(*n)) {
        schema_error("/fidelity_pairs/" + std::to_string(i),
                     "unknown filter \"" + *n + "\"");
      }
    }
  }
  const auto& known = known_checks();
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    if (std::find(known.begin(), known.end(), c.checks[i]) == known.end()) {
      schema_error("/checks/" + std::to_string(i), "unknown check \"" + c.checks[i] + "\"");
    }
  }
  for (const auto& [name, value] : c.tolerances) {
    if (!default_tolerances().count(name)) {
      schema_error("/tolerances/" + name, "unknown tolerance");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      schema_error("/tolerances/" + name, "must be a positive number");
    }
  }
}

}  // namespace

Index ExperimentConfig::dim() const {
  if (model.kind == ModelSpec::Kind::PhotonBox) return model.photon_box.dim();
  return model.steps.front().operators.front().rows();
}

double ExperimentConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

bool operator==(const StateSpec& a, const StateSpec& b) {
  return a.kind == b.kind && same(a.matrix, b.matrix) && a.index == b.index &&
         a.alpha == b.alpha;
}

bool operator==(const StepSpec& a, const StepSpec& b) {
  return a.label == b.label && a.operator_labels == b.operator_labels &&
         same_list(a.operators, b.operators) &&
         a.completeness_tolerance == b.completeness_tolerance && same(a.eta, b.eta);
}

bool operator==(const ModelSpec& a, const ModelSpec& b) {
  return a.kind == b.kind && a.steps == b.steps && a.photon_box == b.photon_box &&
         a.alpha == b.alpha;
}

bool operator==(const FilterConfig& a, const FilterConfig& b) {
  return a.name == b.name && a.initial == b.initial && a.feed == b.feed;
}

bool operator==(const VerifySettings& a, const VerifySettings& b) {
  return a.oracle_instances == b.oracle_instances &&
         a.ideal_instances == b.ideal_instances &&
         a.submartingale_instances == b.submartingale_instances &&
         a.inequality_instances == b.inequality_instances &&
         a.photon_box_draws == b.photon_box_draws && a.seed == b.seed;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.model == b.model && a.true_initial == b.true_initial &&
         a.filters == b.filters && a.fidelity_pairs == b.fidelity_pairs &&
         a.horizon == b.horizon && a.n_traj == b.n_traj && a.seed == b.seed &&
         a.workers == b.workers && a.store_states == b.store_states &&
         a.exact_increments == b.exact_increments && a.out == b.out &&
         a.checks == b.checks && a.tolerances == b.tolerances && a.verify == b.verify;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{
      "model",      "oracle",         "oracle_random", "ideal_limit",
      "submartingale_exact", "inequality", "photon_box", "submartingale"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"hermitian", 1e-9},     {"trace", 1e-9},        {"psd", 1e-9},
      {"oracle_state", 1e-9},  {"oracle_evidence", 1e-10},
      {"ideal_limit", 1e-12},  {"submartingale", 1e-9}, {"inequality", 1e-9},
      {"output_trace", 1e-8}};
  return defaults;
}

Json to_json(const StateSpec& s) {
  Json j{{"kind", kind_name(s.kind)}};
  if (s.kind == StateSpec::Kind::Matrix) j["matrix"] = io::to_json(s.matrix);
  if (s.kind == StateSpec::Kind::Basis) j["index"] = s.index;
  if (s.kind == StateSpec::Kind::Coherent) j["alpha"] = io::complex_to_json(s.alpha);
  return j;
}

Json to_json(const ExperimentConfig& c) {
  Json filters = Json::array();
  for (const FilterConfig& f : c.filters) {
    filters.push_back(Json{{"name", f.name},
                           {"initial", to_json(f.initial)},
                           {"feed", io::to_string(f.feed)}});
  }
  Json pairs = Json::array();
  for (const auto& [a, b] : c.fidelity_pairs) pairs.push_back(Json::array({a, b}));
  Json tolerances = Json::object();
  for (const auto& [name, value] : c.tolerances) tolerances[name] = value;
  return Json{{"model", model_to_json(c.model)},
              {"true_initial", to_json(c.true_initial)},
              {"filters", std::move(filters)},
              {"fidelity_pairs", std::move(pairs)},
              {"horizon", c.horizon},
              {"n_traj", c.n_traj},
              {"seed", c.seed},
              {"workers", c.workers},
              {"store_states", c.store_states},
              {"exact_increments", c.exact_increments},
              {"out", c.out},
              {"checks", c.checks},
              {"tolerances", std::move(tolerances)},
              {"verify", Json{{"oracle_instances", c.verify.oracle_instances},
                              {"ideal_instances", c.verify.ideal_instances},
                              {"submartingale_instances", c.verify.submartingale_instances},
                              {"inequality_instances", c.verify.inequality_instances},
                              {"photon_box_draws", c.verify.photon_box_draws},
                              {"seed", c.verify.seed}}}};
}

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, "", {"model", "true_initial", "filters", "fidelity_pairs", "horizon",
                     "n_traj", "seed", "workers", "store_states", "exact_increments",
                     "out", "checks", "tolerances", "verify"});
  ExperimentConfig c;
  c.model = parse_model(require(j, "model", ""), "/model");
  if (j.contains("true_initial")) {
    c.true_initial = parse_state(j["true_initial"], "/true_initial", false);
  }
  if (j.contains("filters")) {
    const Json& fs = j["filters"];
    if (!fs.is_array()) schema_error("/filters", "expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string fp = child("/filters", i);
      check_keys(fs[i], fp, {"name", "initial", "feed"});
      FilterConfig f;
      f.name = get_string(require(fs[i], "name", fp), child(fp, "name"));
      f.initial = parse_state(require(fs[i], "initial", fp), child(fp, "initial"), true);
      if (fs[i].contains("feed")) {
        f.feed = io::outcome_feed_from_string(get_string(fs[i]["feed"], child(fp, "feed")),
                                              child(fp, "feed"));
      }
      c.filters.push_back(std::move(f));
    }
  }
  if (j.contains("fidelity_pairs")) {
    const Json& ps = j["fidelity_pairs"];
    if (!ps.is_array()) schema_error("/fidelity_pairs", "expected an array");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::string pp = child("/fidelity_pairs", i);
      if (!ps[i].is_array() || ps[i].size() != 2) {
        schema_error(pp, "expected a pair of filter names");
      }
      c.fidelity_pairs.emplace_back(get_string(ps[i][0], child(pp, 0)),
                                    get_string(ps[i][1], child(pp, 1)));
    }
  }
  if (j.contains("horizon")) c.horizon = get_unsigned(j["horizon"], "/horizon");
  if (j.contains("n_traj")) c.n_traj = get_unsigned(j["n_traj"], "/n_traj");
  if (j.contains("seed")) c.seed = get_unsigned(j["seed"], "/seed");
  if (j.contains("workers")) {
    c.workers = static_cast<unsigned>(get_unsigned(j["workers"], "/workers"));
  }
  if (j.contains("store_states")) c.store_states = get_bool(j["store_states"], "/store_states");
  if (j.contains("exact_increments")) {
    c.exact_increments = get_bool(j["exact_increments"], "/exact_increments");
  }
  if (j.contains("out")) c.out = get_string(j["out"], "/out");
  if (j.contains("checks")) {
    const Json& cs = j["checks"];
    if (!cs.is_array()) schema_error("/checks", "expected an array of names");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      c.checks.push_back(get_string(cs[i], child("/checks", i)));
    }
  }
  if (j.contains("tolerances")) {
    const Json& ts = j["tolerances"];
    if (!ts.is_object()) schema_error("/tolerances", "expected an object");
    for (const auto& [name, value] : ts.items()) {
      c.tolerances[name] = get_number(value, child("/tolerances", name));
    }
  }
  if (j.contains("verify")) {
    const Json& v = j["verify"];
    check_keys(v, "/verify", {"oracle_instances", "ideal_instances", "submartingale_instances",
                              "inequality_instances", "photon_box_draws", "seed"});
    auto field = [&](const char* key, std::size_t& target) {
      if (v.contains(key)) target = get_unsigned(v[key], child("/verify", key));
    };
    field("oracle_instances", c.verify.oracle_instances);
    field("ideal_instances", c.verify.ideal_instances);
    field("submartingale_instances", c.verify.submartingale_instances);
    field("inequality_instances", c.verify.inequality_instances);
    field("photon_box_draws", c.verify.photon_box_draws);
    if (v.contains("seed")) c.verify.seed = get_unsigned(v["seed"], "/verify/seed");
  }
  check_consistency(c);
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_config_text(text);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Schema) throw;
    throw Error(ErrorKind::Schema, path + ": " + e.message());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<MeasurementStep> build_steps(const ExperimentConfig& c) {
  return build_steps(c, c.horizon);
}

std::vector<MeasurementStep> build_steps(const ExperimentConfig& c, std::size_t horizon) {
  std::vector<MeasurementStep> steps;
  steps.reserve(horizon);
  const MeasurementStep::Options opts{.precompute_superoperators = true};
  if (c.model.kind == ModelSpec::Kind::Generic) {
    std::vector<MeasurementStep> built;
    for (const StepSpec& s : c.model.steps) {
      built.emplace_back(KrausFamily(s.operators, s.completeness_tolerance, s.operator_labels),
                         ErrorModel::validate(s.eta), s.label, opts);
    }
    for (std::size_t k = 0; k < horizon; ++k) {
      steps.push_back(built.size() == 1 ? built.front() : built.at(k));
    }
    return steps;
  }
  c.model.photon_box.validate();
  const photonbox::PhotonBoxModel model(c.model.photon_box);
  for (std::size_t k = 0; k < horizon; ++k) {
    const Complex alpha = c.model.alpha.empty()       ? Complex(0.0, 0.0)
                          : c.model.alpha.size() == 1 ? c.model.alpha.front()
                                                      : c.model.alpha.at(k);
    steps.push_back(model.step(alpha));
  }
  return steps;
}

DensityOperator build_state(const StateSpec& s, const ExperimentConfig& c) {
  const Index d = c.dim();
  switch (s.kind) {
    case StateSpec::Kind::Truth:
      return build_state(c.true_initial, c);
    case StateSpec::Kind::Matrix:
      return DensityOperator::validate(
          s.matrix, {c.tolerance("hermitian"), c.tolerance("trace"), c.tolerance("psd")});
    case StateSpec::Kind::MaximallyMixed:
      return DensityOperator::maximally_mixed(d);
    case StateSpec::Kind::Basis:
      return DensityOperator::basis_state(d, s.index);
    case StateSpec::Kind::Coherent:
      return photonbox::coherent_state(s.alpha, c.model.photon_box.n_max);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown state kind");
}

TrajectoryConfig build_trajectory_config(const ExperimentConfig& c,
                                         std::vector<MeasurementStep> steps) {
  std::vector<FilterSpec> filters;
  for (const FilterConfig& f : c.filters) {
    filters.push_back(FilterSpec{f.name, build_state(f.initial, c), f.feed});
  }
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < c.filters.size(); ++i) {
      if (c.filters[i].name == name) return i;
    }
    throw Error(ErrorKind::IndexOutOfRange, "unknown filter " + name);
  };
  std::vector<FidelityPair> pairs;
  for (const auto& [a, b] : c.fidelity_pairs) pairs.push_back({index_of(a), index_of(b)});
  TrajectoryConfig t{.true_initial = build_state(c.true_initial, c),
                     .filters = std::move(filters),
                     .steps = std::move(steps),
                     .generator = {},
                     .horizon = c.horizon,
                     .seed = c.seed,
                     .fidelity_pairs = std::move(pairs)};
  t.store_states = c.store_states;
  t.record_predictions = true;
  t.exact_increments = c.exact_increments;
  return t;
}

std::vector<std::size_t> parse_outcomes(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::Schema, std::string("outcomes are not valid JSON: ") + e.what());
    }
    std::string path;
    if (j.is_object()) {
      check_keys(j, "", {"outcomes"});
      j = Json(require(j, "outcomes", ""));
      path = "/outcomes";
    }
    if (!j.is_array()) schema_error(path, "expected an array of outcome indices");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(static_cast<std::size_t>(get_unsigned(j[i], child(path, i))));
    }
    return out;
  }
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::istringstream tokens(line);
    std::string tok;
    std::size_t column = 0;
    while (tokens >> tok) {
      ++column;
      std::size_t used = 0;
      unsigned long long v = 0;
      bool ok = !tok.empty() && tok[0] != '-';
      if (ok) {
        try {
          v = std::stoull(tok, &used);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || used != tok.size()) {
        throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ", field " +
                                           std::to_string(column) + ": \"" + tok +
                                           "\" is not a non-negative integer");
      }
      out.push_back(static_cast<std::size_t>(v));
    }
  }
  return out;
}

std::vector<std::size_t> load_outcomes(const std::string& path) {
  try {
    return parse_outcomes(read_file(path));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Schema) throw;
    throw Error(ErrorKind::Schema, path + ": " + e.message());
  }
}

}  // namespace qfilter::cli
