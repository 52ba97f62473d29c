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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfilter/filter.hpp"
#include "qfilter/random.hpp"

namespace qfilter {

struct TruthStep {
  std::size_t ideal = 0;
  std::size_t real = 0;
  DensityOperator next;
};

/// Samples the ideal jump from the true state, applies it and passes the
/// jump through the detector. Draw order: q first, then p.
TruthStep step_truth(const DensityOperator& rho, const MeasurementStep& step,
                     Rng& rng);

enum class OutcomeFeed {
  /// The filter sees the detector outcomes of the simulated truth.
  Truth,
  /// The filter sees a seeded permutation of that outcome stream. Negative
  /// control only: such a filter is not conditioned on the truth.
  Shuffled,
};

struct FilterSpec {
  std::string name;
  DensityOperator initial;
  OutcomeFeed feed = OutcomeFeed::Truth;
};

/// Indices into TrajectoryConfig::filters.
struct FidelityPair {
  std::size_t first = 0;
  std::size_t second = 0;
  bool operator==(const FidelityPair&) const = default;
};

/// Produces the measurement step for step k (1-based) from the current
/// estimate of the first filter. Called concurrently by ensemble workers.
using StepGenerator =
    std::function<MeasurementStep(std::size_t k, const DensityOperator& lead)>;

struct TrajectoryConfig {
  DensityOperator true_initial;
  std::vector<FilterSpec> filters;
  /// One step reused at every k, or exactly `horizon` steps.
  std::vector<MeasurementStep> steps;
  /// When set, replaces `steps`.
  StepGenerator generator;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  std::vector<FidelityPair> fidelity_pairs;
  /// Keep every true state and estimate; otherwise only outcomes,
  /// predictions and fidelities are recorded.
  bool store_states = true;
  /// Record the first filter's predicted law of each real outcome.
  bool record_predictions = true;
  /// Record, per pair and step, the exact conditional increment
  /// E[F_{k+1} | history] − F_k by enumerating the real outcomes.
  bool exact_increments = false;
};

struct StepRecord {
  std::size_t k = 0;
  std::size_t ideal = 0;
  std::size_t real = 0;
  std::vector<double> predicted;
  /// Per pair, F after the step.
  std::vector<double> fidelities;
  std::vector<double> exact_increments;
  /// Per filter.
  std::vector<std::uint8_t> regularized;
  std::optional<DensityOperator> truth;
  std::vector<DensityOperator> estimates;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<std::string> filter_names;
  std::vector<OutcomeFeed> feeds;
  /// Whether each filter started exactly at the true initial state.
  std::vector<std::uint8_t> initialized_at_truth;
  std::vector<FidelityPair> pairs;
  std::vector<double> initial_fidelities;
  std::vector<StepRecord> steps;

  /// F_1, F_2, …, F_{horizon+1} for one pair.
  std::vector<double> fidelity_series(std::size_t pair) const;
};

TrajectoryRecord run_trajectory(const TrajectoryConfig& config);

/// Trajectory i runs with seed base_seed + i; each Rng scrambles its seed
/// with splitmix64, so consecutive seeds give unrelated streams. Results
/// are ordered by index and independent of `workers` (0 = hardware
/// concurrency).
std::vector<TrajectoryRecord> run_ensemble(const TrajectoryConfig& config,
                                           std::size_t n_traj,
                                           std::uint64_t base_seed,
                                           unsigned workers = 0);

}  // namespace qfilter
