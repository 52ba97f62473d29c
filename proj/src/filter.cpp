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

#include "qfilter/filter.hpp"

#include <cmath>
#include <string>

#include "qfilter/log.hpp"

namespace qfilter {

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_outcome(const MeasurementStep& step, std::size_t p) {
  if (p >= step.m_real()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "real outcome " + std::to_string(p) + " outside [0, " +
                    std::to_string(step.m_real()) + ")",
                static_cast<double>(p));
  }
}

void check_dim(const MeasurementStep& step, Index d) {
  if (step.dim() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "step acts on dimension " + std::to_string(step.dim()) +
                    ", state has dimension " + std::to_string(d));
  }
}

}  // namespace

MeasurementStep::MeasurementStep(KrausFamily family, ErrorModel errors,
                                 std::string label)
    : MeasurementStep(std::move(family), std::move(errors), std::move(label),
                      Options{}) {}

MeasurementStep::MeasurementStep(KrausFamily family, ErrorModel errors,
                                 std::string label, Options options) {
  if (static_cast<Index>(family.size()) != errors.m_ideal()) {
    throw Error(ErrorKind::DimensionMismatch,
                "Kraus family has " + std::to_string(family.size()) +
                    " operators but the error model has " +
                    std::to_string(errors.m_ideal()) + " ideal outcomes");
  }
  auto data = std::make_shared<Data>(
      Data{std::move(family), std::move(errors), std::move(label), {}, {}});
  const Index d = data->family.dim();
  const auto m_real = static_cast<std::size_t>(data->errors.m_real());
  for (std::size_t p = 0; p < m_real; ++p) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    for (std::size_t q = 0; q < data->family.size(); ++q) {
      const double w = data->errors(static_cast<Index>(p), static_cast<Index>(q));
      if (w != 0.0) e += w * data->family.effect(q);
    }
    data->coarse_effects.push_back(hermitian_part(e));
  }
  if (options.precompute_superoperators) {
    std::vector<ComplexMatrix> kron_terms;
    kron_terms.reserve(data->family.size());
    for (const ComplexMatrix& m : data->family.operators()) {
      kron_terms.push_back(kron(m.conjugate(), m));
    }
    for (std::size_t p = 0; p < m_real; ++p) {
      ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
      for (std::size_t q = 0; q < kron_terms.size(); ++q) {
        const double w = data->errors(static_cast<Index>(p), static_cast<Index>(q));
        if (w != 0.0) s += w * kron_terms[q];
      }
      data->superoperators.push_back(std::move(s));
    }
  }
  data_ = std::move(data);
}

std::vector<ComplexMatrix> coarse_kraus(const MeasurementStep& step,
                                        std::size_t p) {
  check_outcome(step, p);
  std::vector<ComplexMatrix> out;
  out.reserve(step.m_ideal());
  for (std::size_t q = 0; q < step.m_ideal(); ++q) {
    const double w =
        step.errors()(static_cast<Index>(p), static_cast<Index>(q));
    out.push_back(std::sqrt(w) * step.family().op(q));
  }
  return out;
}

ComplexMatrix coarse_numerator_direct(const ComplexMatrix& rho,
                                      const MeasurementStep& step,
                                      std::size_t p) {
  check_outcome(step, p);
  check_dim(step, rho.rows());
  const Index d = rho.rows();
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  ComplexMatrix left(d, d);
  for (std::size_t q = 0; q < step.m_ideal(); ++q) {
    const double w = step.errors()(static_cast<Index>(p), static_cast<Index>(q));
    if (w == 0.0) continue;
    const ComplexMatrix& m = step.family().op(q);
    left.noalias() = m * rho;
    acc.noalias() += w * (left * m.adjoint());
  }
  return hermitian_part(acc);
}

ComplexMatrix coarse_numerator(const ComplexMatrix& rho,
                               const MeasurementStep& step, std::size_t p) {
  if (!step.has_superoperators()) {
    return coarse_numerator_direct(rho, step, p);
  }
  check_outcome(step, p);
  check_dim(step, rho.rows());
  const Index d = rho.rows();
  ComplexMatrix out(d, d);
  Eigen::Map<ComplexVector> out_vec(out.data(), d * d);
  Eigen::Map<const ComplexVector> in_vec(rho.data(), d * d);
  out_vec.noalias() = step.superoperator(p) * in_vec;
  return hermitian_part(out);
}

RegularizedResult regularized_limit(const ComplexMatrix& numerator,
                                    const ComplexMatrix& identity_numerator) {
  if (!(real_trace(identity_numerator) > 0.0)) {
    throw Error(ErrorKind::ZeroEvidence,
                "outcome has zero probability from every state");
  }
  ComplexMatrix previous;
  ComplexMatrix current;
  for (std::size_t i = 0; i < kRegularizationLadder.size(); ++i) {
    const ComplexMatrix n =
        numerator + kRegularizationLadder[i] * identity_numerator;
    current = n / real_trace(n);
    if (i > 0 &&
        max_abs(ComplexMatrix(current - previous)) < kRegularizationAgreement) {
      return {hermitian_part(current), true};
    }
    previous = current;
  }
  return {hermitian_part(current), false};
}

CoarseUpdate coarse_update(const DensityOperator& rho,
                           const MeasurementStep& step, std::size_t p) {
  const ComplexMatrix numerator = coarse_numerator(rho.matrix(), step, p);
  const double denominator = real_trace(numerator);
  if (denominator > kProbFloor) {
    return {DensityOperator::from_cp_output(numerator), denominator, false,
            true};
  }
  // (ρ + εI)/tr(ρ + εI) maps to N(ρ) + ε·N(I) after normalization.
  const Index d = rho.dim();
  const RegularizedResult r = regularized_limit(
      numerator, coarse_numerator(ComplexMatrix::Identity(d, d), step, p));
  if (!r.converged) {
    warn("filter regularization did not stabilize for outcome " +
         std::to_string(p) + "; using the smallest-epsilon result");
  }
  return {DensityOperator::from_cp_output(r.state), denominator, true,
          r.converged};
}

FilterState filter_update(FilterState state, const MeasurementStep& step,
                          std::size_t p) {
  CoarseUpdate update = coarse_update(state.estimate, step, p);
  if (state.log) {
    state.log->push_back({p, update.denominator, update.regularized});
  }
  state.estimate = std::move(update.state);
  state.step_index += 1;
  state.last_regularized = update.regularized;
  state.last_converged = update.converged;
  return state;
}

std::vector<double> outcome_probabilities(const DensityOperator& estimate,
                                          const MeasurementStep& step) {
  check_dim(step, estimate.dim());
  std::vector<double> p(step.m_real());
  const ComplexMatrix rho_t = estimate.matrix().transpose();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = step.coarse_effect(i).cwiseProduct(rho_t).sum().real();
  }
  const KrausFamily& f = step.family();
  return normalize_probabilities(
      std::move(p),
      std::max(f.completeness_tolerance(), f.probability_deficit_bound()));
}

std::vector<double> outcome_probabilities(const FilterState& state,
                                          const MeasurementStep& step) {
  return outcome_probabilities(state.estimate, step);
}

std::vector<FilterState> run_filter(const DensityOperator& initial,
                                    std::span<const MeasurementStep> steps,
                                    std::span<const std::size_t> outcomes,
                                    bool enable_log) {
  if (steps.size() != outcomes.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(steps.size()) + " steps but " +
                    std::to_string(outcomes.size()) + " outcomes");
  }
  std::vector<FilterState> states;
  states.reserve(steps.size() + 1);
  states.emplace_back(initial, enable_log);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    states.push_back(filter_update(states.back(), steps[k], outcomes[k]));
  }
  return states;
}

}  // namespace qfilter
