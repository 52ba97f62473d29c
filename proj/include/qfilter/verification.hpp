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
#include <string>
#include <vector>

#include "qfilter/filter.hpp"
#include "qfilter/photon_box.hpp"
#include "qfilter/random.hpp"

// Randomized check suites. Each suite is deterministic in its seed and
// never throws on a failed instance; failures are counted in the result.

namespace qfilter {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t instances = 0;
  std::size_t failures = 0;
  /// Largest error (or most negative slack) seen over all instances.
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// A filtering problem with outcomes drawn from a simulated truth.
struct FilterInstance {
  DensityOperator truth_initial;
  DensityOperator filter_initial;
  std::vector<MeasurementStep> steps;
  std::vector<std::size_t> outcomes;
};

FilterInstance random_filter_instance(Rng& rng, Index dim, std::size_t m_ideal,
                                      std::size_t m_real, std::size_t horizon);

/// Draws outcomes for the given steps by simulating from truth_initial.
std::vector<std::size_t> simulate_outcomes(const DensityOperator& truth_initial,
                                           std::span<const MeasurementStep> steps,
                                           Rng& rng);

/// A step built from projector blocks with a block-respecting error model:
/// outcomes in the second block have zero weight on states supported in
/// the first block.
struct BlockInstance {
  MeasurementStep step;
  /// Isometry whose columns span the first block.
  ComplexMatrix first_block;
};

BlockInstance random_block_step(Rng& rng, Index dim);

/// Density operator supported in the column span of `basis`.
DensityOperator random_density_in(const ComplexMatrix& basis, Rng& rng);

struct OracleErrors {
  double state = 0.0;
  double evidence = 0.0;
  double evidence_value = 0.0;
};

/// Recursive filter against brute-force enumeration, both for the final
/// state (max-norm) and for the evidence against the product of predicted
/// outcome probabilities. Throws CombinatorialExplosion past the guard.
OracleErrors compare_with_oracle(const DensityOperator& initial,
                                 std::span<const MeasurementStep> steps,
                                 std::span<const std::size_t> outcomes);

SuiteResult verify_oracle_random(std::size_t instances, std::uint64_t seed,
                                 double state_tolerance = 1e-9,
                                 double evidence_tolerance = 1e-10);

SuiteResult verify_ideal_limit(std::size_t instances, std::uint64_t seed,
                               double tolerance = 1e-12);

SuiteResult verify_exact_submartingale(std::size_t instances, std::uint64_t seed,
                                       double tolerance = 1e-9);

SuiteResult verify_inequality(std::size_t instances, std::uint64_t seed,
                              double tolerance = 1e-9);

SuiteResult verify_photon_box_structure(const photonbox::PhotonBoxParams& params,
                                        std::size_t draws, std::uint64_t seed);

photonbox::PhotonBoxParams random_photon_box_params(Rng& rng, int n_max = 10);

}  // namespace qfilter
