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

#include <memory>
#include <string>
#include <vector>

#include "qfilter/core.hpp"

namespace qfilter {

/// Below this a jump (or a filter denominator) is treated as impossible.
inline constexpr double kProbFloor = 1e-12;

inline constexpr double kDefaultCompletenessTolerance = 1e-10;

/// Ordered set of d×d operators M_q with Σ M_q†M_q = I up to a declared
/// tolerance (max-norm). Labels are metadata only.
///
/// Copies share the immutable operator storage.
class KrausFamily {
 public:
  KrausFamily(std::vector<ComplexMatrix> operators,
              double completeness_tolerance = kDefaultCompletenessTolerance,
              std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return data_->ops.size(); }
  Index dim() const noexcept { return data_->ops.front().rows(); }
  const ComplexMatrix& op(std::size_t q) const { return data_->ops.at(q); }
  const std::vector<ComplexMatrix>& operators() const noexcept {
    return data_->ops;
  }
  /// Effect operators M_q†M_q.
  const ComplexMatrix& effect(std::size_t q) const { return data_->effects.at(q); }
  const std::vector<std::string>& labels() const noexcept {
    return data_->labels;
  }
  const std::string& label(std::size_t q) const { return data_->labels.at(q); }

  double completeness_tolerance() const noexcept { return data_->tolerance; }
  /// ‖Σ M†M − I‖_max as measured at construction.
  double completeness_deviation() const noexcept { return data_->deviation; }
  /// Spectral norm of Σ M†M − I; bounds |Σ_q tr(M_q ρ M_q†) − 1| for any
  /// density operator ρ.
  double probability_deficit_bound() const noexcept {
    return data_->spectral_deviation;
  }

 private:
  struct Data {
    std::vector<ComplexMatrix> ops;
    std::vector<ComplexMatrix> effects;
    std::vector<std::string> labels;
    double tolerance = 0.0;
    double deviation = 0.0;
    double spectral_deviation = 0.0;
  };
  std::shared_ptr<const Data> data_;
};

/// tr(M_q ρ M_q†) for every q, clamped at zero and renormalized when the
/// family is only approximately complete.
std::vector<double> jump_probabilities(const KrausFamily& family,
                                       const DensityOperator& rho);

/// M_q ρ M_q† / tr(M_q ρ M_q†).
DensityOperator apply_jump(const KrausFamily& family, std::size_t q,
                           const DensityOperator& rho);

/// Σ_q M_q ρ M_q†, trace-renormalized.
DensityOperator kraus_map(const KrausFamily& family,
                          const DensityOperator& rho);

/// Shared by the jump law and the filter's outcome law: clamp tiny negative
/// entries, check the total against `bound`, renormalize.
std::vector<double> normalize_probabilities(std::vector<double> raw,
                                            double bound);

}  // namespace qfilter
