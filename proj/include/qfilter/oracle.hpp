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

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qfilter/filter.hpp"

namespace qfilter {

/// Largest number of ideal-jump sequences the oracle will enumerate.
inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

struct JumpSequence {
  std::vector<std::size_t> q;
  auto operator<=>(const JumpSequence&) const = default;
};

/// Π_k m_ideal(k), saturating at UINT64_MAX.
std::uint64_t sequence_count(std::span<const MeasurementStep> steps);

/// Longest prefix of `steps` whose sequence count stays within the limit.
std::size_t max_enumerable_steps(std::span<const MeasurementStep> steps);

/// Optimal estimate from the explicit Bayes expansion: the sum over every
/// ideal-jump sequence of Π η_{p_k,q_k} · M⃗ ρ₁ M⃗†, normalized. Throws
/// CombinatorialExplosion beyond kEnumerationLimit sequences and ZeroEvidence
/// when the observed outcomes are impossible from `initial`.
DensityOperator direct_estimate(const DensityOperator& initial,
                                std::span<const MeasurementStep> steps,
                                std::span<const std::size_t> outcomes);

/// Posterior probability of each ideal-jump sequence given the observed
/// real outcomes. Sequences with zero prior-times-likelihood are omitted.
std::map<JumpSequence, double> sequence_posterior(
    const DensityOperator& initial, std::span<const MeasurementStep> steps,
    std::span<const std::size_t> outcomes);

/// Probability of the observed real-outcome sequence given the initial
/// state. Returns 0 rather than throwing for impossible sequences.
double marginal_evidence(const DensityOperator& initial,
                         std::span<const MeasurementStep> steps,
                         std::span<const std::size_t> outcomes);

}  // namespace qfilter
