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
#include <random>
#include <vector>

#include "qfilter/core.hpp"

namespace qfilter {

/// SplitMix64 finalizer; used to turn nearby seeds into unrelated streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded random stream with platform-independent output.
///
/// The engine is mt19937_64 seeded with splitmix64(seed). Uniform and
/// normal variates are produced by explicit formulas rather than the
/// standard-library distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer on [0, n).
  std::size_t index(std::size_t n);
  /// Standard normal via Box-Muller.
  double normal();
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Index drawn from a discrete distribution by walking the cumulative sum
/// in index order. Floating-point residual mass goes to the last index with
/// non-zero weight, so zero-weight entries are never drawn.
std::size_t sample_discrete(std::span<const double> probabilities, Rng& rng);

ComplexMatrix random_complex_gaussian(Index rows, Index cols, Rng& rng);

/// G·G†/tr(G·G†) with complex Gaussian G; full rank almost surely.
DensityOperator random_density(Index dim, Rng& rng);

/// Random state with exactly `rank` non-zero eigenvalues.
DensityOperator random_density_of_rank(Index dim, Index rank, Rng& rng);

DensityOperator random_pure_state(Index dim, Rng& rng);

ComplexMatrix random_unitary(Index dim, Rng& rng);

/// `count` operators with Σ M†M = I exactly (to roundoff): the column-
/// orthonormalized stack of complex Gaussian blocks, split back into blocks.
std::vector<ComplexMatrix> random_kraus_operators(Index dim, std::size_t count,
                                                  Rng& rng);

/// Left-stochastic m_real × m_ideal matrix with random columns.
RealMatrix random_stochastic_matrix(Index m_real, Index m_ideal, Rng& rng);

}  // namespace qfilter
