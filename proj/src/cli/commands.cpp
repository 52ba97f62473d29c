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

#include "qfilter/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qfilter/log.hpp"
#include "qfilter/oracle.hpp"
#include "qfilter/verification.hpp"

namespace qfilter::cli {

using io::Json;

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct MeanSe {
  std::vector<double> mean;
  std::vector<double> se;
};

MeanSe fidelity_statistics(const std::vector<TrajectoryRecord>& records, std::size_t pair) {
  std::vector<std::vector<double>> series;
  series.reserve(records.size());
  for (const TrajectoryRecord& r : records) series.push_back(r.fidelity_series(pair));
  const std::size_t len = series.front().size();
  const double n = static_cast<double>(series.size());
  MeanSe out{std::vector<double>(len), std::vector<double>(len)};
  for (std::size_t k = 0; k < len; ++k) {
    double sum = 0.0;
    for (const auto& s : series) sum += s[k];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& s : series) ss += (s[k] - mean) * (s[k] - mean);
    out.mean[k] = mean;
    out.se[k] = series.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  return out;
}

Json suite_json(const SuiteResult& r) {
  return Json{{"instances", r.instances},
              {"failures", r.failures},
              {"worst", r.worst},
              {"tolerance", r.tolerance},
              {"detail", r.detail}};
}

CheckResult run_check(const std::string& name, const ExperimentConfig& c) {
  CheckResult out{name, false, Json::object()};
  try {
    if (name == "model") {
      const std::vector<MeasurementStep> steps = build_steps(c);
      build_state(c.true_initial, c);
      for (const FilterConfig& f : c.filters) build_state(f.initial, c);
      double completeness = 0.0;
      double column = 0.0;
      for (const MeasurementStep& s : steps) {
        completeness = std::max(completeness, s.family().completeness_deviation());
        const RealMatrix& eta = s.errors().matrix();
        column = std::max(column, (eta.colwise().sum().array() - 1.0).abs().maxCoeff());
      }
      out.details = Json{{"dim", c.dim()},
                         {"steps", steps.size()},
                         {"m_ideal", steps.front().m_ideal()},
                         {"m_real", steps.front().m_real()},
                         {"completeness_deviation", completeness},
                         {"column_sum_deviation", column}};
      out.passed = true;
    } else if (name == "oracle") {
      const std::vector<MeasurementStep> steps = build_steps(c);
      out.details["sequences"] = sequence_count(steps);
      out.details["suggested_max_k"] = max_enumerable_steps(steps);
      const DensityOperator truth = build_state(c.true_initial, c);
      const DensityOperator initial =
          c.filters.empty() ? truth : build_state(c.filters.front().initial, c);
      Rng rng(c.verify.seed);
      const std::vector<std::size_t> outcomes = simulate_outcomes(truth, steps, rng);
      const OracleErrors e = compare_with_oracle(initial, steps, outcomes);
      out.details["outcomes"] = outcomes;
      out.details["state_error"] = e.state;
      out.details["evidence"] = e.evidence_value;
      out.details["evidence_error"] = e.evidence;
      out.details["state_tolerance"] = c.tolerance("oracle_state");
      out.details["evidence_tolerance"] = c.tolerance("oracle_evidence");
      out.passed = e.state <= c.tolerance("oracle_state") &&
                   e.evidence <= c.tolerance("oracle_evidence");
    } else if (name == "oracle_random") {
      const SuiteResult r =
          verify_oracle_random(c.verify.oracle_instances, c.verify.seed,
                               c.tolerance("oracle_state"), c.tolerance("oracle_evidence"));
      out.details = suite_json(r);
      out.passed = r.passed;
    } else if (name == "ideal_limit") {
      const SuiteResult r = verify_ideal_limit(c.verify.ideal_instances, c.verify.seed,
                                               c.tolerance("ideal_limit"));
      out.details = suite_json(r);
      out.passed = r.passed;
    } else if (name == "submartingale_exact") {
      const SuiteResult r = verify_exact_submartingale(
          c.verify.submartingale_instances, c.verify.seed, c.tolerance("submartingale"));
      out.details = suite_json(r);
      out.passed = r.passed;
    } else if (name == "inequality") {
      const SuiteResult r = verify_inequality(c.verify.inequality_instances, c.verify.seed,
                                              c.tolerance("inequality"));
      out.details = suite_json(r);
      out.passed = r.passed;
    } else if (name == "photon_box") {
      const photonbox::PhotonBoxParams params = c.model.kind == ModelSpec::Kind::PhotonBox
                                                    ? c.model.photon_box
                                                    : photonbox::PhotonBoxParams{};
      const SuiteResult r =
          verify_photon_box_structure(params, c.verify.photon_box_draws, c.verify.seed);
      out.details = suite_json(r);
      out.passed = r.passed;
    } else if (name == "submartingale") {
      const SimulationOutput sim = simulate(c);
      out.details = sim.submartingale ? *sim.submartingale : Json::object();
      out.passed = sim.checks_passed;
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown check " + name);
    }
  } catch (const Error& e) {
    out.passed = false;
    out.details["error"] = error_json(e)["error"];
  }
  return out;
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Schema:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::ParameterOutOfRange:
    case ErrorKind::NegativeEntry:
    case ErrorKind::ColumnSumDeviation:
    case ErrorKind::CompletenessViolation:
    case ErrorKind::NonHermitianInput:
    case ErrorKind::NegativeEigenvalue:
    case ErrorKind::TraceDeviation:
    case ErrorKind::NonFinite:
    case ErrorKind::BadPartition:
    case ErrorKind::EnsembleTooSmall:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

Json error_json(const Error& e) {
  return Json{{"error", Json{{"kind", to_string(e.kind())},
                             {"message", e.message()},
                             {"magnitude", e.magnitude()}}}};
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "failed writing " + path);
}

std::string filter_output(const ExperimentConfig& c, std::span<const std::size_t> outcomes,
                          const std::string& filter_name) {
  const bool repeats = c.model.kind == ModelSpec::Kind::Generic ? c.model.steps.size() == 1
                                                                 : c.model.alpha.size() <= 1;
  if (!repeats && outcomes.size() > c.horizon) {
    throw Error(ErrorKind::Schema, "outcomes: " + std::to_string(outcomes.size()) +
                                       " outcomes but the model defines only " +
                                       std::to_string(c.horizon) + " steps");
  }
  const std::vector<MeasurementStep> steps = build_steps(c, outcomes.size());
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (outcomes[k] >= steps[k].m_real()) {
      throw Error(ErrorKind::Schema,
                  "outcomes/" + std::to_string(k) + ": index " + std::to_string(outcomes[k]) +
                      " is out of range for m_real = " + std::to_string(steps[k].m_real()));
    }
  }

  const FilterConfig* chosen = nullptr;
  for (const FilterConfig& f : c.filters) {
    if (filter_name.empty() || f.name == filter_name) {
      chosen = &f;
      break;
    }
  }
  if (!filter_name.empty() && chosen == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "unknown filter " + filter_name);
  }
  const DensityOperator initial =
      chosen ? build_state(chosen->initial, c) : build_state(c.true_initial, c);

  std::string text;
  auto emit = [&text](const Json& j) { text += j.dump() + "\n"; };
  emit(Json{{"k", 1},
            {"filter", chosen ? chosen->name : std::string("truth")},
            {"trace", real_trace(initial.matrix())},
            {"estimate", io::to_json(initial.matrix())}});
  FilterState state(initial);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const std::vector<double> predicted = outcome_probabilities(state, steps[k]);
    state = filter_update(std::move(state), steps[k], outcomes[k]);
    emit(Json{{"k", k + 2},
              {"outcome", outcomes[k]},
              {"predicted", predicted},
              {"probability", predicted[outcomes[k]]},
              {"regularized", state.last_regularized},
              {"trace", real_trace(state.estimate.matrix())},
              {"estimate", io::to_json(state.estimate.matrix())}});
  }
  return text;
}

std::string fidelity_columns(std::span<const double> mean, std::span<const double> se) {
  std::string csv = "k,mean_F,se\n";
  for (std::size_t k = 0; k < mean.size(); ++k) {
    csv += std::to_string(k + 1) + "," + format_number(mean[k]) + "," + format_number(se[k]) +
           "\n";
  }
  return csv;
}

SimulationOutput simulate(const ExperimentConfig& c) {
  if (c.filters.empty()) {
    throw Error(ErrorKind::InvalidArgument, "simulate needs at least one filter");
  }
  const TrajectoryConfig tc = build_trajectory_config(c, build_steps(c));
  const std::vector<TrajectoryRecord> records =
      run_ensemble(tc, c.n_traj, c.seed, c.workers);

  SimulationOutput out;
  for (const TrajectoryRecord& r : records) out.trajectories += io::to_json(r).dump() + "\n";

  std::vector<std::size_t> first_counts(tc.steps.front().m_real(), 0);
  std::size_t regularized = 0;
  for (const TrajectoryRecord& r : records) {
    ++first_counts.at(r.steps.front().real);
    for (const StepRecord& s : r.steps) {
      for (auto f : s.regularized) regularized += f;
    }
  }
  Json pairs = Json::array();
  for (std::size_t i = 0; i < c.fidelity_pairs.size(); ++i) {
    const MeanSe st = fidelity_statistics(records, i);
    const auto& [a, b] = c.fidelity_pairs[i];
    pairs.push_back(Json{{"first", a},
                         {"second", b},
                         {"mean_fidelity", st.mean},
                         {"se_fidelity", st.se}});
    out.columns.emplace_back("fidelity_" + a + "_" + b + ".csv",
                             fidelity_columns(st.mean, st.se));
  }
  Json filters = Json::array();
  for (const FilterConfig& f : c.filters) filters.push_back(f.name);
  out.summary = Json{{"n_traj", c.n_traj},
                     {"horizon", c.horizon},
                     {"seed", c.seed},
                     {"filters", std::move(filters)},
                     {"first_outcome_counts", first_counts},
                     {"first_outcome_probabilities", records.front().steps.front().predicted},
                     {"regularized_updates", regularized},
                     {"pairs", std::move(pairs)}};

  if (std::find(c.checks.begin(), c.checks.end(), "submartingale") != c.checks.end()) {
    Json reports = Json::array();
    for (std::size_t i = 0; i < c.fidelity_pairs.size(); ++i) {
      const SubmartingaleReport rep = ensemble_submartingale(records, i);
      if (rep.asserted && !rep.passes) out.checks_passed = false;
      Json j = io::to_json(rep);
      j["first"] = c.fidelity_pairs[i].first;
      j["second"] = c.fidelity_pairs[i].second;
      reports.push_back(std::move(j));
    }
    out.submartingale = Json{{"passes", out.checks_passed}, {"pairs", std::move(reports)}};
  }
  return out;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& r) { return r.passed; });
}

Json VerifyReport::to_json() const {
  Json list = Json::array();
  for (const CheckResult& r : checks) {
    list.push_back(Json{{"name", r.name}, {"passed", r.passed}, {"details", r.details}});
  }
  return Json{{"passed", passed()}, {"checks", std::move(list)}};
}

std::vector<std::string> default_verify_checks() {
  std::vector<std::string> names;
  for (const std::string& n : known_checks()) {
    if (n != "submartingale") names.push_back(n);
  }
  return names;
}

VerifyReport verify(const ExperimentConfig& c, const std::vector<std::string>& checks) {
  VerifyReport report;
  for (const std::string& name : checks.empty() ? default_verify_checks() : checks) {
    report.checks.push_back(run_check(name, c));
  }
  return report;
}

Json photonbox_export(const photonbox::PhotonBoxParams& params, Complex alpha) {
  using namespace photonbox;
  params.validate();
  const LOperators ops = l_operators(params);
  Json atom = Json::array();
  for (std::size_t a = 0; a < kAtomJumps; ++a) {
    atom.push_back(Json{{"label", label(static_cast<AtomJump>(a))},
                        {"matrix", io::to_json(ops.atom[a])}});
  }
  Json cavity = Json::array();
  for (std::size_t q = 0; q < kCavityJumps; ++q) {
    cavity.push_back(Json{{"label", label(static_cast<CavityJump>(q))},
                          {"matrix", io::to_json(ops.cavity[q])}});
  }
  Json detections = Json::array();
  for (std::size_t p = 0; p < kDetections; ++p) {
    detections.push_back(label(static_cast<Detection>(p)));
  }
  const CavityDeficit cav = cavity_sector_deficit(ops);
  return Json{{"params", io::to_json(params)},
              {"dim", params.dim()},
              {"alpha", io::complex_to_json(alpha)},
              {"displacement", io::to_json(displacement(alpha, params.n_max))},
              {"atom_operators", std::move(atom)},
              {"cavity_operators", std::move(cavity)},
              {"kraus", io::to_json(composite_kraus(params, alpha))},
              {"detections", std::move(detections)},
              {"eta", io::to_json(table1_error_model(params))},
              {"atom_sector_deficit", atom_sector_deficit(ops)},
              {"cavity_sector_deficit",
               Json{{"below_truncation", cav.below_truncation}, {"full", cav.full}}}};
}

}  // namespace qfilter::cli
