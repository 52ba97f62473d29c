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

#include "qfilter/kraus.hpp"

#include <cstdio>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qfilter {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_dims(const KrausFamily& family, const DensityOperator& rho) {
  if (family.dim() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "Kraus family acts on dimension " +
                    std::to_string(family.dim()) + ", state has dimension " +
                    std::to_string(rho.dim()));
  }
}

double jump_weight(const KrausFamily& family, std::size_t q,
                   const ComplexMatrix& rho) {
  // tr(M ρ M†) = tr(M†M ρ) = Σ_ij E_ij ρ_ji
  return family.effect(q).cwiseProduct(rho.transpose()).sum().real();
}

}  // namespace

KrausFamily::KrausFamily(std::vector<ComplexMatrix> operators,
                         double completeness_tolerance,
                         std::vector<std::string> labels) {
  if (operators.empty()) {
    throw Error(ErrorKind::InvalidArgument, "Kraus family needs an operator");
  }
  if (!(completeness_tolerance >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "completeness tolerance must be non-negative");
  }
  const Index d = operators.front().rows();
  if (d == 0) {
    throw Error(ErrorKind::DimensionMismatch, "Kraus operators are empty");
  }
  auto data = std::make_shared<Data>();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t q = 0; q < operators.size(); ++q) {
    const ComplexMatrix& m = operators[q];
    if (m.rows() != d || m.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "Kraus operator " + std::to_string(q) + " is " +
                      std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", expected " +
                      std::to_string(d) + "x" + std::to_string(d));
    }
    if (!all_finite(m)) {
      throw Error(ErrorKind::NonFinite,
                  "Kraus operator " + std::to_string(q) + " has NaN/Inf");
    }
    data->effects.push_back(hermitian_part(m.adjoint() * m));
    sum += data->effects.back();
  }
  const ComplexMatrix excess = sum - ComplexMatrix::Identity(d, d);
  data->deviation = max_abs(excess);
  if (data->deviation > completeness_tolerance) {
    throw Error(ErrorKind::CompletenessViolation,
                "max |sum M^dagger M - I| = " +
                    fmt(data->deviation) + " exceeds tolerance " +
                    fmt(completeness_tolerance),
                data->deviation);
  }
  const RealVector ev = hermitian_eigenvalues(hermitian_part(excess));
  data->spectral_deviation = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (labels.empty()) {
    for (std::size_t q = 0; q < operators.size(); ++q) {
      labels.push_back(std::to_string(q));
    }
  } else if (labels.size() != operators.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "label count does not match operator count");
  }
  data->labels = std::move(labels);
  data->ops = std::move(operators);
  data->tolerance = completeness_tolerance;
  data_ = std::move(data);
}

std::vector<double> normalize_probabilities(std::vector<double> raw,
                                            double bound) {
  for (double& p : raw) {
    if (p < 0.0 && p >= -1e-12) p = 0.0;
  }
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  const double deficit = total - 1.0;
  const auto min_it = std::min_element(raw.begin(), raw.end());
  if (*min_it < 0.0) {
    throw Error(ErrorKind::ProbabilityDeficit,
                "negative probability " + fmt(*min_it), *min_it);
  }
  // 1e-12 absorbs roundoff for exactly complete families.
  if (std::abs(deficit) > bound + 1e-12) {
    throw Error(ErrorKind::ProbabilityDeficit,
                "probabilities sum to 1 " + std::string(deficit < 0 ? "-" : "+") +
                    " " + fmt(std::abs(deficit)),
                deficit);
  }
  for (double& p : raw) p /= total;
  return raw;
}

std::vector<double> jump_probabilities(const KrausFamily& family,
                                       const DensityOperator& rho) {
  check_dims(family, rho);
  std::vector<double> p(family.size());
  for (std::size_t q = 0; q < family.size(); ++q) {
    p[q] = jump_weight(family, q, rho.matrix());
  }
  return normalize_probabilities(
      std::move(p),
      std::max(family.completeness_tolerance(), family.probability_deficit_bound()));
}

DensityOperator apply_jump(const KrausFamily& family, std::size_t q,
                           const DensityOperator& rho) {
  check_dims(family, rho);
  if (q >= family.size()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "jump index " + std::to_string(q) + " outside [0, " +
                    std::to_string(family.size()) + ")",
                static_cast<double>(q));
  }
  const ComplexMatrix& m = family.op(q);
  const ComplexMatrix out = m * rho.matrix() * m.adjoint();
  const double weight = real_trace(out);
  if (!(weight > kProbFloor)) {
    throw Error(ErrorKind::ZeroProbabilityJump,
                "jump " + std::to_string(q) + " has probability " +
                    fmt(weight),
                weight);
  }
  return DensityOperator::from_cp_output(out);
}

DensityOperator kraus_map(const KrausFamily& family,
                          const DensityOperator& rho) {
  check_dims(family, rho);
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const ComplexMatrix& m : family.operators()) {
    out.noalias() += m * rho.matrix() * m.adjoint();
  }
  return DensityOperator::from_cp_output(out);
}

}  // namespace qfilter
