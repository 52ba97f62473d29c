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

#include "qfilter/stats.hpp"

#include <cmath>
#include <numeric>

namespace qfilter {

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

ComplexMatrix part_map(std::span<const ComplexMatrix> ops,
                       const std::vector<std::size_t>& part,
                       const ComplexMatrix& x) {
  ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i : part) acc.noalias() += ops[i] * x * ops[i].adjoint();
  return hermitian_part(acc);
}

}  // namespace

OneStepCheck exact_one_step_submartingale(const DensityOperator& rho_hat,
                                          const DensityOperator& rho_e,
                                          const MeasurementStep& step,
                                          double tolerance) {
  OneStepCheck out;
  out.lhs = fidelity(rho_hat, rho_e);
  double expected = 0.0;
  for (std::size_t p = 0; p < step.m_real(); ++p) {
    const ComplexMatrix n_hat = coarse_numerator(rho_hat.matrix(), step, p);
    const double weight = real_trace(n_hat);
    if (!(weight > kProbFloor)) continue;
    const CoarseUpdate next_e = coarse_update(rho_e, step, p);
    if (next_e.regularized) ++out.regularized_outcomes;
    expected +=
        weight * fidelity(DensityOperator::from_cp_output(n_hat), next_e.state);
  }
  out.rhs = expected;
  out.slack = out.rhs - out.lhs;
  out.holds = out.slack >= -tolerance;
  return out;
}

SubmartingaleReport ensemble_submartingale(
    std::span<const TrajectoryRecord> ensemble, std::size_t pair) {
  if (ensemble.size() < kMinEnsembleSize) {
    throw Error(ErrorKind::EnsembleTooSmall,
                std::to_string(ensemble.size()) + " trajectories, need at least " +
                    std::to_string(kMinEnsembleSize),
                static_cast<double>(ensemble.size()));
  }
  SubmartingaleReport report;
  report.n_traj = ensemble.size();
  report.pair = pair;

  const TrajectoryRecord& first = ensemble.front();
  const std::size_t horizon = first.steps.size();
  for (const TrajectoryRecord& r : ensemble) {
    if (pair >= r.pairs.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "fidelity pair not recorded");
    }
    if (r.steps.size() != horizon || !(r.pairs[pair] == first.pairs[pair])) {
      throw Error(ErrorKind::InvalidArgument,
                  "ensemble records have inconsistent layouts");
    }
    const FidelityPair& pr = r.pairs[pair];
    if (!r.initialized_at_truth[pr.first]) {
      report.asserted = false;
      report.note = "the first filter of the pair does not start at the true initial state";
    }
    if (r.feeds[pr.first] != OutcomeFeed::Truth ||
        r.feeds[pr.second] != OutcomeFeed::Truth) {
      report.asserted = false;
      report.note = "a filter of the pair is fed a mismatched outcome stream";
    }
  }

  const std::size_t n = ensemble.size();
  std::vector<std::vector<double>> series;
  series.reserve(n);
  for (const TrajectoryRecord& r : ensemble) series.push_back(r.fidelity_series(pair));

  std::vector<double> column(n);
  for (std::size_t k = 0; k <= horizon; ++k) {
    for (std::size_t i = 0; i < n; ++i) column[i] = series[i][k];
    const MeanSe m = mean_se(column);
    report.mean_fidelity.push_back(m.mean);
    report.se_fidelity.push_back(m.se);
  }

  bool all_pass = true;
  for (std::size_t k = 0; k < horizon; ++k) {
    StepStatistics st;
    st.k = k + 1;
    st.count = n;
    st.mean_fidelity = report.mean_fidelity[k];
    st.se_fidelity = report.se_fidelity[k];
    std::size_t decreases = 0;
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = series[i][k + 1] - series[i][k];
      if (column[i] < 0.0) ++decreases;
    }
    const MeanSe inc = mean_se(column);
    st.mean_increment = inc.mean;
    st.se_increment = inc.se;
    st.decrease_fraction = static_cast<double>(decreases) / static_cast<double>(n);
    st.passes = inc.mean >= -3.0 * inc.se - kSubmartingaleSlack;
    all_pass = all_pass && st.passes;

    double exact_sum = 0.0;
    std::size_t exact_n = 0;
    for (const TrajectoryRecord& r : ensemble) {
      const StepRecord& s = r.steps[k];
      if (pair < s.exact_increments.size()) {
        const double e = s.exact_increments[pair];
        exact_sum += e;
        ++exact_n;
        ++report.exact_checks;
        if (e < -kSubmartingaleSlack) ++report.exact_violations;
      }
    }
    if (exact_n > 0) st.mean_exact_increment = exact_sum / static_cast<double>(exact_n);
    report.steps.push_back(st);
  }

  std::vector<double> per_traj(n);
  for (std::size_t i = 0; i < n; ++i) {
    per_traj[i] = (series[i][horizon] - series[i][0]) / static_cast<double>(horizon);
  }
  const MeanSe head = mean_se(per_traj);
  report.headline_mean = head.mean;
  report.headline_se = head.se;
  report.final_exceeds_initial =
      report.mean_fidelity.back() > report.mean_fidelity.front();
  report.passes = report.asserted && all_pass;
  return report;
}

InequalityCheck check_fidelity_inequality(
    std::span<const ComplexMatrix> operators,
    const std::vector<std::vector<std::size_t>>& partition,
    const DensityOperator& rho, const DensityOperator& sigma) {
  if (operators.empty()) {
    throw Error(ErrorKind::BadPartition, "no operators given");
  }
  const Index d = rho.dim();
  if (sigma.dim() != d) {
    throw Error(ErrorKind::DimensionMismatch, "rho and sigma differ in dimension");
  }
  ComplexMatrix completeness = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < operators.size(); ++i) {
    const ComplexMatrix& l = operators[i];
    if (l.rows() != d || l.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  "operator " + std::to_string(i) + " has the wrong shape");
    }
    if (max_abs(l) == 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "operator " + std::to_string(i) + " is zero");
    }
    completeness += l.adjoint() * l;
  }
  const double deviation =
      max_abs(ComplexMatrix(completeness - ComplexMatrix::Identity(d, d)));
  if (deviation > 1e-9) {
    throw Error(ErrorKind::CompletenessViolation,
                "max |sum L^dagger L - I| = " + std::to_string(deviation),
                deviation);
  }
  std::vector<int> seen(operators.size(), 0);
  for (std::size_t j = 0; j < partition.size(); ++j) {
    if (partition[j].empty()) {
      throw Error(ErrorKind::BadPartition, "part " + std::to_string(j) + " is empty");
    }
    for (std::size_t i : partition[j]) {
      if (i >= operators.size()) {
        throw Error(ErrorKind::BadPartition,
                    "index " + std::to_string(i) + " names no operator");
      }
      if (seen[i]++) {
        throw Error(ErrorKind::BadPartition,
                    "index " + std::to_string(i) + " appears twice");
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw Error(ErrorKind::BadPartition,
                  "index " + std::to_string(i) + " is not covered");
    }
  }

  InequalityCheck out;
  out.dim = d;
  out.partition = partition;
  out.lhs = fidelity(rho, sigma);
  const ComplexMatrix identity = ComplexMatrix::Identity(d, d);
  for (std::size_t j = 0; j < partition.size(); ++j) {
    const ComplexMatrix n_rho = part_map(operators, partition[j], rho.matrix());
    const double w = real_trace(n_rho);
    out.weights.push_back(w);
    const ComplexMatrix n_sigma = part_map(operators, partition[j], sigma.matrix());
    if (!(w > kProbFloor)) {
      out.part_fidelities.push_back(0.0);
      continue;
    }
    DensityOperator sigma_j = DensityOperator::maximally_mixed(d);
    if (real_trace(n_sigma) > kProbFloor) {
      sigma_j = DensityOperator::from_cp_output(n_sigma);
    } else {
      const RegularizedResult r =
          regularized_limit(n_sigma, part_map(operators, partition[j], identity));
      sigma_j = DensityOperator::from_cp_output(r.state);
      out.regularized_parts.push_back(j);
    }
    const double f = fidelity(DensityOperator::from_cp_output(n_rho), sigma_j);
    out.part_fidelities.push_back(f);
    out.rhs += w * f;
  }
  out.slack = out.rhs - out.lhs;
  return out;
}

}  // namespace qfilter
