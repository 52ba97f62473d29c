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

#include <span>
#include <string>
#include <vector>

#include "qfilter/filter.hpp"
#include "qfilter/simulator.hpp"

namespace qfilter {

inline constexpr double kSubmartingaleSlack = 1e-9;

struct OneStepCheck {
  /// F(ρ̂, ρᵉ).
  double lhs = 0.0;
  /// Σ_p P̂(p) · F(𝓜_p(ρ̂), 𝓜_p(ρᵉ)), the exact conditional expectation of
  /// the next fidelity.
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = true;
  /// Real outcomes where the ρᵉ update needed regularization.
  std::size_t regularized_outcomes = 0;
};

/// Exact one-step check of the fidelity submartingale: enumerates every
/// real outcome with its predicted probability under ρ̂ (no sampling).
/// Outcomes with P̂(p) ≤ kProbFloor carry no weight and are skipped.
OneStepCheck exact_one_step_submartingale(const DensityOperator& rho_hat,
                                          const DensityOperator& rho_e,
                                          const MeasurementStep& step,
                                          double tolerance = kSubmartingaleSlack);

struct StepStatistics {
  /// F_k → F_{k+1}.
  std::size_t k = 0;
  std::size_t count = 0;
  double mean_fidelity = 0.0;  // of F_k
  double se_fidelity = 0.0;
  double mean_increment = 0.0;  // of F_{k+1} − F_k
  double se_increment = 0.0;
  /// Fraction of trajectories whose realized fidelity decreased.
  double decrease_fraction = 0.0;
  /// Mean exact conditional increment, when the records carry it.
  double mean_exact_increment = 0.0;
  bool passes = true;
};

struct SubmartingaleReport {
  std::size_t n_traj = 0;
  std::size_t pair = 0;
  /// False when the preconditions of the submartingale property do not hold for the
  /// ensemble (first filter not started at the truth, or a filter fed a
  /// mismatched outcome stream). Nothing is claimed in that case.
  bool asserted = true;
  std::string note;
  std::vector<StepStatistics> steps;
  /// Mean fidelity at k = 1, …, horizon + 1 with standard errors.
  std::vector<double> mean_fidelity;
  std::vector<double> se_fidelity;
  /// Per-trajectory average increment (F_{K+1} − F_1)/K.
  double headline_mean = 0.0;
  double headline_se = 0.0;
  std::size_t exact_checks = 0;
  std::size_t exact_violations = 0;
  /// Mean fidelity at the last step exceeds the mean at k = 1.
  bool final_exceeds_initial = false;
  /// asserted and every per-step mean increment ≥ −3·SE − kSubmartingaleSlack.
  bool passes = false;
};

inline constexpr std::size_t kMinEnsembleSize = 100;

/// Ensemble-level statistics for one fidelity pair. Throws
/// EnsembleTooSmall below kMinEnsembleSize trajectories.
SubmartingaleReport ensemble_submartingale(
    std::span<const TrajectoryRecord> ensemble, std::size_t pair = 0);

struct InequalityCheck {
  Index dim = 0;
  std::vector<std::vector<std::size_t>> partition;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  /// tr Σ_{i∈P_j} L_i ρ L_i† per part.
  std::vector<double> weights;
  std::vector<double> part_fidelities;
  /// Parts whose σ-side trace vanished, evaluated through σ_ε.
  std::vector<std::size_t> regularized_parts;
};

/// Both sides of F(ρ,σ) ≤ Σ_j w_j F(ρ_j, σ_j) for operators with
/// Σ L†L = I and a partition of their indices.
InequalityCheck check_fidelity_inequality(
    std::span<const ComplexMatrix> operators,
    const std::vector<std::vector<std::size_t>>& partition,
    const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace qfilter
