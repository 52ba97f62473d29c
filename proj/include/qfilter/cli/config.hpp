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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qfilter/io.hpp"
#include "qfilter/photon_box.hpp"
#include "qfilter/simulator.hpp"

namespace qfilter::cli {

struct StateSpec {
  enum class Kind { Truth, Matrix, MaximallyMixed, Basis, Coherent };
  Kind kind = Kind::MaximallyMixed;
  ComplexMatrix matrix;
  Index index = 0;
  Complex alpha{0.0, 0.0};
};

/// One measurement step of a generic model, kept unvalidated until built.
struct StepSpec {
  std::string label;
  std::vector<std::string> operator_labels;
  std::vector<ComplexMatrix> operators;
  double completeness_tolerance = kDefaultCompletenessTolerance;
  RealMatrix eta;
};

struct ModelSpec {
  enum class Kind { Generic, PhotonBox };
  Kind kind = Kind::Generic;
  /// Generic: one step reused at every k, or exactly `horizon` steps.
  std::vector<StepSpec> steps;
  photonbox::PhotonBoxParams photon_box;
  /// Photon box: empty (α = 0), one value reused, or exactly `horizon` values.
  std::vector<Complex> alpha;
};

struct FilterConfig {
  std::string name;
  StateSpec initial;
  OutcomeFeed feed = OutcomeFeed::Truth;
};

struct VerifySettings {
  std::size_t oracle_instances = 200;
  std::size_t ideal_instances = 100;
  std::size_t submartingale_instances = 1000;
  std::size_t inequality_instances = 1000;
  std::size_t photon_box_draws = 100;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  ModelSpec model;
  StateSpec true_initial;
  std::vector<FilterConfig> filters;
  std::vector<std::pair<std::string, std::string>> fidelity_pairs;
  std::size_t horizon = 1;
  std::size_t n_traj = 1;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool store_states = false;
  bool exact_increments = false;
  std::string out;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  VerifySettings verify;

  /// Dimension implied by the model.
  Index dim() const;
  double tolerance(const std::string& name) const;
};

bool operator==(const StateSpec& a, const StateSpec& b);
bool operator==(const StepSpec& a, const StepSpec& b);
bool operator==(const ModelSpec& a, const ModelSpec& b);
bool operator==(const FilterConfig& a, const FilterConfig& b);
bool operator==(const VerifySettings& a, const VerifySettings& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Recognized check names, in the order verify runs them.
const std::vector<std::string>& known_checks();
/// Recognized tolerance names with their defaults.
const std::map<std::string, double>& default_tolerances();

io::Json to_json(const StateSpec& s);
io::Json to_json(const ExperimentConfig& c);

/// Structural validation only: shapes, names, references, dimensions.
/// Numerical validity of the model (completeness, column sums) is checked
/// when the model is built.
ExperimentConfig parse_config(const io::Json& j);
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

std::string dump(const io::Json& j);

/// Measurement steps for k = 1..horizon (shared data where steps repeat).
std::vector<MeasurementStep> build_steps(const ExperimentConfig& c);
std::vector<MeasurementStep> build_steps(const ExperimentConfig& c,
                                         std::size_t horizon);

DensityOperator build_state(const StateSpec& s, const ExperimentConfig& c);

TrajectoryConfig build_trajectory_config(const ExperimentConfig& c,
                                         std::vector<MeasurementStep> steps);

/// Outcome indices from a JSON array, an object {"outcomes": [...]}, or
/// whitespace-separated integers with '#' comments.
std::vector<std::size_t> parse_outcomes(const std::string& text);
std::vector<std::size_t> load_outcomes(const std::string& path);

}  // namespace qfilter::cli
