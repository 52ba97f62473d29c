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

#include "qfilter/core.hpp"
#include "qfilter/random.hpp"

namespace qfilter {

inline constexpr double kColumnSumTolerance = 1e-12;

/// Left-stochastic detector matrix: entry (p, q) is the probability that
/// the detector reports p when the ideal outcome was q.
class ErrorModel {
 public:
  /// Throws NegativeEntry or ColumnSumDeviation naming the offending entry.
  static ErrorModel validate(const RealMatrix& eta);
  /// Perfect detector on m outcomes.
  static ErrorModel identity(Index m);

  Index m_real() const noexcept { return eta_.rows(); }
  Index m_ideal() const noexcept { return eta_.cols(); }
  double operator()(Index p, Index q) const { return eta_(p, q); }
  const RealMatrix& matrix() const noexcept { return eta_; }

 private:
  explicit ErrorModel(RealMatrix eta) : eta_(std::move(eta)) {}
  RealMatrix eta_;
};

/// Draws a real outcome from column q.
std::size_t sample_real_outcome(const ErrorModel& model, std::size_t q,
                                Rng& rng);

}  // namespace qfilter
