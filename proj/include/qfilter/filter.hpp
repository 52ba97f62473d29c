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

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfilter/error_model.hpp"
#include "qfilter/kraus.hpp"

namespace qfilter {

/// One time step of the measurement model: the ideal Kraus family and the
/// detector error matrix linking its outcomes to the reported ones.
///
/// Copies share the immutable payload.
class MeasurementStep {
 public:
  struct Options {
    /// Precompute the d²×d² coarse-grained superoperators so each filter
    /// update is one matrix-vector product. Worth it when the same step is
    /// reused across many updates.
    bool precompute_superoperators = false;
  };

  MeasurementStep(KrausFamily family, ErrorModel errors, std::string label = {});
  MeasurementStep(KrausFamily family, ErrorModel errors, std::string label,
                  Options options);

  const KrausFamily& family() const noexcept { return data_->family; }
  const ErrorModel& errors() const noexcept { return data_->errors; }
  const std::string& label() const noexcept { return data_->label; }
  std::size_t m_ideal() const noexcept { return data_->family.size(); }
  std::size_t m_real() const noexcept {
    return static_cast<std::size_t>(data_->errors.m_real());
  }
  Index dim() const noexcept { return data_->family.dim(); }

  /// Σ_q η_{p,q} M_q†M_q.
  const ComplexMatrix& coarse_effect(std::size_t p) const {
    return data_->coarse_effects.at(p);
  }
  bool has_superoperators() const noexcept {
    return !data_->superoperators.empty();
  }
  /// Σ_q η_{p,q} conj(M_q) ⊗ M_q, acting on column-major vec(ρ).
  const ComplexMatrix& superoperator(std::size_t p) const {
    return data_->superoperators.at(p);
  }

 private:
  struct Data {
    KrausFamily family;
    ErrorModel errors;
    std::string label;
    std::vector<ComplexMatrix> coarse_effects;
    std::vector<ComplexMatrix> superoperators;
  };
  std::shared_ptr<const Data> data_;
};

/// Coarse-grained operators {√η_{p,q} M_q : q}.
std::vector<ComplexMatrix> coarse_kraus(const MeasurementStep& step,
                                        std::size_t p);

/// Σ_q η_{p,q} M_q ρ M_q†, re-symmetrized. Uses the superoperator when the
/// step carries one.
ComplexMatrix coarse_numerator(const ComplexMatrix& rho,
                               const MeasurementStep& step, std::size_t p);

/// Same sum, always evaluated operator by operator.
ComplexMatrix coarse_numerator_direct(const ComplexMatrix& rho,
                                      const MeasurementStep& step,
                                      std::size_t p);

/// Regularization ladder for degenerate denominators.
inline constexpr std::array<double, 3> kRegularizationLadder{1e-8, 1e-10, 1e-12};
inline constexpr double kRegularizationAgreement = 1e-6;

struct RegularizedResult {
  ComplexMatrix state;
  bool converged = true;
};

/// Limit of (N + ε·N_I)/tr(N + ε·N_I) along the regularization ladder,
/// where N is a CP map applied to a degenerate state and N_I the same map
/// applied to the identity. Throws ZeroEvidence when tr N_I vanishes.
RegularizedResult regularized_limit(const ComplexMatrix& numerator,
                                    const ComplexMatrix& identity_numerator);

struct CoarseUpdate {
  DensityOperator state;
  /// tr Σ_q η_{p,q} M_q ρ M_q† at the unregularized input.
  double denominator = 0.0;
  bool regularized = false;
  /// False when the regularized results did not stabilize along the ladder.
  bool converged = true;
};

/// ρ ↦ Σ_q η_{p,q} M_q ρ M_q† / tr(·). When the denominator is at or below
/// kProbFloor the update is evaluated at (ρ + εI)/tr(ρ + εI) for each ε of
/// the ladder and the first pair of successive results agreeing within
/// kRegularizationAgreement is accepted.
CoarseUpdate coarse_update(const DensityOperator& rho,
                           const MeasurementStep& step, std::size_t p);

struct FilterLogEntry {
  std::size_t outcome = 0;
  double predicted_probability = 0.0;
  bool regularized = false;
};

struct FilterState {
  explicit FilterState(DensityOperator initial, bool enable_log = false)
      : estimate(std::move(initial)) {
    if (enable_log) log.emplace();
  }

  DensityOperator estimate;
  /// k of the estimate; 1 for the initial state.
  std::size_t step_index = 1;
  bool last_regularized = false;
  bool last_converged = true;
  std::optional<std::vector<FilterLogEntry>> log;
};

/// Recursive optimal estimate after observing real outcome p.
FilterState filter_update(FilterState state, const MeasurementStep& step,
                          std::size_t p);

/// Predicted law of the next real outcome.
std::vector<double> outcome_probabilities(const DensityOperator& estimate,
                                          const MeasurementStep& step);
std::vector<double> outcome_probabilities(const FilterState& state,
                                          const MeasurementStep& step);

/// Sequential updates; element 0 is the initial state, element k is the
/// estimate after k outcomes.
std::vector<FilterState> run_filter(const DensityOperator& initial,
                                    std::span<const MeasurementStep> steps,
                                    std::span<const std::size_t> outcomes,
                                    bool enable_log = false);

}  // namespace qfilter
