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

#include "qfilter/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace qfilter {

namespace {

using WideComplex = std::complex<long double>;
using WideMatrix = Eigen::Matrix<WideComplex, Eigen::Dynamic, Eigen::Dynamic>;

using LeafVisitor = std::function<void(const std::vector<std::size_t>& seq,
                                       double eta_weight,
                                       const ComplexMatrix& conditional)>;

void check_inputs(const DensityOperator& initial,
                  std::span<const MeasurementStep> steps,
                  std::span<const std::size_t> outcomes) {
  if (steps.size() != outcomes.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(steps.size()) + " steps but " +
                    std::to_string(outcomes.size()) + " outcomes");
  }
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k].dim() != initial.dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "step " + std::to_string(k) + " dimension mismatch");
    }
    if (outcomes[k] >= steps[k].m_real()) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "outcome " + std::to_string(outcomes[k]) + " at step " +
                      std::to_string(k) + " out of range",
                  static_cast<double>(outcomes[k]));
    }
  }
  const std::uint64_t count = sequence_count(steps);
  if (count > kEnumerationLimit) {
    throw Error(ErrorKind::CombinatorialExplosion,
                std::to_string(count) + " jump sequences exceed the limit of " +
                    std::to_string(kEnumerationLimit) +
                    "; suggested max k = " +
                    std::to_string(max_enumerable_steps(steps)),
                static_cast<double>(max_enumerable_steps(steps)));
  }
}

// Depth-first walk over q-tuples in lexicographic order. Each leaf receives
// the η-product and M⃗ ρ₁ M⃗† (unnormalized). Branches with zero η weight
// contribute nothing and are skipped.
void enumerate(const ComplexMatrix& initial,
               std::span<const MeasurementStep> steps,
               std::span<const std::size_t> outcomes,
               const LeafVisitor& visit) {
  std::vector<std::size_t> seq(steps.size());
  std::function<void(std::size_t, const ComplexMatrix&, double)> descend =
      [&](std::size_t depth, const ComplexMatrix& x, double weight) {
        if (depth == steps.size()) {
          visit(seq, weight, x);
          return;
        }
        const MeasurementStep& step = steps[depth];
        const auto p = static_cast<Index>(outcomes[depth]);
        for (std::size_t q = 0; q < step.m_ideal(); ++q) {
          const double eta = step.errors()(p, static_cast<Index>(q));
          if (eta == 0.0) continue;
          seq[depth] = q;
          const ComplexMatrix& m = step.family().op(q);
          descend(depth + 1, m * x * m.adjoint(), weight * eta);
        }
      };
  descend(0, initial, 1.0);
}

}  // namespace

std::uint64_t sequence_count(std::span<const MeasurementStep> steps) {
  std::uint64_t count = 1;
  for (const MeasurementStep& s : steps) {
    const std::uint64_t m = s.m_ideal();
    if (count > std::numeric_limits<std::uint64_t>::max() / m) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= m;
  }
  return count;
}

std::size_t max_enumerable_steps(std::span<const MeasurementStep> steps) {
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::uint64_t m = steps[k].m_ideal();
    if (count * m > kEnumerationLimit) return k;
    count *= m;
  }
  return steps.size();
}

DensityOperator direct_estimate(const DensityOperator& initial,
                                std::span<const MeasurementStep> steps,
                                std::span<const std::size_t> outcomes) {
  check_inputs(initial, steps, outcomes);
  const Index d = initial.dim();
  WideMatrix acc = WideMatrix::Zero(d, d);
  enumerate(initial.matrix(), steps, outcomes,
            [&](const std::vector<std::size_t>&, double w,
                const ComplexMatrix& x) {
              acc += (w * x).cast<WideComplex>();
            });
  long double tr = 0.0L;
  for (Index i = 0; i < d; ++i) tr += acc(i, i).real();
  if (!(tr > kProbFloor)) {
    throw Error(ErrorKind::ZeroEvidence,
                "observed outcomes have probability " +
                    std::to_string(static_cast<double>(tr)) +
                    " from the initial state",
                static_cast<double>(tr));
  }
  acc /= WideComplex(tr, 0.0L);
  return DensityOperator::from_cp_output(acc.cast<Complex>());
}

std::map<JumpSequence, double> sequence_posterior(
    const DensityOperator& initial, std::span<const MeasurementStep> steps,
    std::span<const std::size_t> outcomes) {
  check_inputs(initial, steps, outcomes);
  std::map<JumpSequence, long double> terms;
  long double total = 0.0L;
  enumerate(initial.matrix(), steps, outcomes,
            [&](const std::vector<std::size_t>& seq, double w,
                const ComplexMatrix& x) {
              const long double term =
                  static_cast<long double>(w) * real_trace(x);
              if (term <= 0.0L) return;
              terms.emplace(JumpSequence{seq}, term);
              total += term;
            });
  if (!(total > kProbFloor)) {
    throw Error(ErrorKind::ZeroEvidence,
                "observed outcomes have probability " +
                    std::to_string(static_cast<double>(total)),
                static_cast<double>(total));
  }
  std::map<JumpSequence, double> posterior;
  for (auto& [seq, term] : terms) {
    posterior.emplace_hint(posterior.end(), seq,
                           static_cast<double>(term / total));
  }
  return posterior;
}

double marginal_evidence(const DensityOperator& initial,
                         std::span<const MeasurementStep> steps,
                         std::span<const std::size_t> outcomes) {
  check_inputs(initial, steps, outcomes);
  long double total = 0.0L;
  enumerate(initial.matrix(), steps, outcomes,
            [&](const std::vector<std::size_t>&, double w,
                const ComplexMatrix& x) {
              total += static_cast<long double>(w) * real_trace(x);
            });
  return static_cast<double>(total);
}

}  // namespace qfilter
