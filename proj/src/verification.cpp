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

#include "qfilter/verification.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "qfilter/oracle.hpp"
#include "qfilter/simulator.hpp"
#include "qfilter/stats.hpp"

namespace qfilter {

namespace {

void record(SuiteResult& r, double error, bool failed) {
  ++r.instances;
  r.worst = std::max(r.worst, error);
  if (failed) ++r.failures;
}

void finish(SuiteResult& r) { r.passed = r.failures == 0 && r.instances > 0; }

std::string excerpt(const Error& e) {
  return std::string(to_string(e.kind())) + ": " + e.what();
}

}  // namespace

std::vector<std::size_t> simulate_outcomes(const DensityOperator& truth_initial,
                                           std::span<const MeasurementStep> steps,
                                           Rng& rng) {
  std::vector<std::size_t> outcomes;
  DensityOperator rho = truth_initial;
  for (const MeasurementStep& step : steps) {
    TruthStep t = step_truth(rho, step, rng);
    outcomes.push_back(t.real);
    rho = std::move(t.next);
  }
  return outcomes;
}

FilterInstance random_filter_instance(Rng& rng, Index dim, std::size_t m_ideal,
                                      std::size_t m_real, std::size_t horizon) {
  std::vector<MeasurementStep> steps;
  for (std::size_t k = 0; k < horizon; ++k) {
    KrausFamily family(random_kraus_operators(dim, m_ideal, rng));
    ErrorModel eta = ErrorModel::validate(random_stochastic_matrix(
        static_cast<Index>(m_real), static_cast<Index>(m_ideal), rng));
    steps.emplace_back(std::move(family), std::move(eta));
  }
  DensityOperator truth = random_density(dim, rng);
  DensityOperator initial = random_density(dim, rng);
  std::vector<std::size_t> outcomes = simulate_outcomes(truth, steps, rng);
  return {std::move(truth), std::move(initial), std::move(steps), std::move(outcomes)};
}

BlockInstance random_block_step(Rng& rng, Index dim) {
  const Index b = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(dim - 1)));
  const ComplexMatrix v = random_unitary(dim, rng);
  const ComplexMatrix first = v.leftCols(b);
  const ComplexMatrix second = v.rightCols(dim - b);
  const ComplexMatrix p0 = first * first.adjoint();
  const ComplexMatrix p1 = second * second.adjoint();

  // Two jumps per block with random splitting weights.
  std::vector<ComplexMatrix> ops;
  for (const ComplexMatrix* proj : {&p0, &p1}) {
    const double w = 0.1 + 0.8 * rng.uniform();
    ops.push_back(std::sqrt(w) * random_unitary(dim, rng) * *proj);
    ops.push_back(std::sqrt(1.0 - w) * random_unitary(dim, rng) * *proj);
  }

  // Outcomes 0,1 only see first-block jumps, outcomes 2,3 only second-block.
  RealMatrix eta = RealMatrix::Zero(4, 4);
  const RealMatrix top = random_stochastic_matrix(2, 2, rng);
  const RealMatrix bottom = random_stochastic_matrix(2, 2, rng);
  eta.block(0, 0, 2, 2) = top;
  eta.block(2, 2, 2, 2) = bottom;
  return {MeasurementStep(KrausFamily(std::move(ops)), ErrorModel::validate(eta)),
          first};
}

DensityOperator random_density_in(const ComplexMatrix& basis, Rng& rng) {
  const DensityOperator inner = random_density(basis.cols(), rng);
  return DensityOperator::from_cp_output(basis * inner.matrix() * basis.adjoint());
}

OracleErrors compare_with_oracle(const DensityOperator& initial,
                                 std::span<const MeasurementStep> steps,
                                 std::span<const std::size_t> outcomes) {
  const DensityOperator direct = direct_estimate(initial, steps, outcomes);
  const std::vector<FilterState> states = run_filter(initial, steps, outcomes, true);
  OracleErrors out;
  out.state = max_abs(ComplexMatrix(states.back().estimate.matrix() - direct.matrix()));
  double product = 1.0;
  for (const FilterLogEntry& e : *states.back().log) product *= e.predicted_probability;
  out.evidence_value = marginal_evidence(initial, steps, outcomes);
  out.evidence = std::abs(out.evidence_value - product);
  return out;
}

SuiteResult verify_oracle_random(std::size_t instances, std::uint64_t seed,
                                 double state_tolerance, double evidence_tolerance) {
  SuiteResult r;
  r.name = "oracle_random";
  r.tolerance = state_tolerance;
  Rng rng(seed);
  double worst_evidence = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const std::size_t mi = 2 + rng.index(2);
    const std::size_t mr = 2 + rng.index(2);
    const std::size_t k = 1 + rng.index(5);
    try {
      FilterInstance inst = random_filter_instance(rng, d, mi, mr, k);
      const OracleErrors e =
          compare_with_oracle(inst.filter_initial, inst.steps, inst.outcomes);
      worst_evidence = std::max(worst_evidence, e.evidence);
      record(r, e.state, e.state > state_tolerance || e.evidence > evidence_tolerance);
    } catch (const Error& e) {
      record(r, 0.0, true);
      r.detail = excerpt(e);
    }
  }
  finish(r);
  std::ostringstream os;
  os.precision(3);
  os << "max state error " << r.worst << ", max evidence error " << worst_evidence;
  if (!r.detail.empty()) os << "; last error " << r.detail;
  r.detail = os.str();
  return r;
}

SuiteResult verify_ideal_limit(std::size_t instances, std::uint64_t seed,
                               double tolerance) {
  SuiteResult r;
  r.name = "ideal_limit";
  r.tolerance = tolerance;
  Rng rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const std::size_t m = 2 + rng.index(3);
    KrausFamily family(random_kraus_operators(d, m, rng));
    const MeasurementStep step(family, ErrorModel::identity(static_cast<Index>(m)));
    const DensityOperator rho = random_density(d, rng);
    const std::size_t q = sample_discrete(jump_probabilities(family, rho), rng);
    const FilterState next = filter_update(FilterState(rho), step, q);
    const DensityOperator jumped = apply_jump(family, q, rho);
    const double err = max_abs(ComplexMatrix(next.estimate.matrix() - jumped.matrix()));
    record(r, err, err > tolerance);
  }
  finish(r);
  return r;
}

SuiteResult verify_exact_submartingale(std::size_t instances, std::uint64_t seed,
                                       double tolerance) {
  SuiteResult r;
  r.name = "submartingale_exact";
  r.tolerance = tolerance;
  Rng rng(seed);
  std::size_t regularized = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    try {
      OneStepCheck c;
      if (i % 2 == 0) {
        const std::size_t mi = 2 + rng.index(3);
        const std::size_t mr = 2 + rng.index(2);
        const MeasurementStep step(
            KrausFamily(random_kraus_operators(d, mi, rng)),
            ErrorModel::validate(random_stochastic_matrix(
                static_cast<Index>(mr), static_cast<Index>(mi), rng)));
        const DensityOperator rho_hat = random_density(d, rng);
        const Index rank = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(d)));
        const DensityOperator rho_e = random_density_of_rank(d, rank, rng);
        c = exact_one_step_submartingale(rho_hat, rho_e, step, tolerance);
      } else {
        const BlockInstance block = random_block_step(rng, d);
        const DensityOperator rho_hat = random_density(d, rng);
        const DensityOperator rho_e = random_density_in(block.first_block, rng);
        c = exact_one_step_submartingale(rho_hat, rho_e, block.step, tolerance);
      }
      if (c.regularized_outcomes > 0) ++regularized;
      record(r, std::max(0.0, -c.slack), !c.holds);
    } catch (const Error& e) {
      record(r, 0.0, true);
      r.detail = excerpt(e) + "; ";
    }
  }
  finish(r);
  r.detail += std::to_string(regularized) + " instances used the regularized branch";
  return r;
}

SuiteResult verify_inequality(std::size_t instances, std::uint64_t seed,
                              double tolerance) {
  SuiteResult r;
  r.name = "inequality";
  r.tolerance = tolerance;
  Rng rng(seed);
  for (std::size_t i = 0; i < instances; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const std::size_t s = 1 + rng.index(8);
    const std::vector<ComplexMatrix> ops = random_kraus_operators(d, s, rng);
    // Random partition: shuffle indices, cut into 1..s parts.
    std::vector<std::size_t> order(s);
    for (std::size_t j = 0; j < s; ++j) order[j] = j;
    for (std::size_t j = s; j > 1; --j) std::swap(order[j - 1], order[rng.index(j)]);
    const std::size_t parts = 1 + rng.index(s);
    std::vector<std::vector<std::size_t>> partition(parts);
    for (std::size_t j = 0; j < s; ++j) {
      partition[j < parts ? j : rng.index(parts)].push_back(order[j]);
    }
    const DensityOperator rho = random_density(d, rng);
    const Index rank = 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(d)));
    const DensityOperator sigma = random_density_of_rank(d, rank, rng);
    try {
      const InequalityCheck c = check_fidelity_inequality(ops, partition, rho, sigma);
      record(r, std::max(0.0, -c.slack), c.slack < -tolerance);
    } catch (const Error& e) {
      record(r, 0.0, true);
      r.detail = excerpt(e);
    }
  }
  finish(r);
  return r;
}

photonbox::PhotonBoxParams random_photon_box_params(Rng& rng, int n_max) {
  photonbox::PhotonBoxParams p;
  p.n_max = n_max;
  const RealMatrix counts = random_stochastic_matrix(3, 1, rng);
  for (Index i = 0; i < 3; ++i) p.atom_count[static_cast<std::size_t>(i)] = counts(i, 0);
  p.detection_efficiency = rng.uniform();
  p.eta_g = 0.5 * rng.uniform();
  p.eta_e = 0.5 * rng.uniform();
  p.epsilon = 0.05 * rng.uniform();
  p.n_th = 0.2 * rng.uniform();
  p.phi0 = std::numbers::pi * rng.uniform();
  p.phi_r = 2.0 * std::numbers::pi * rng.uniform();
  return p;
}

SuiteResult verify_photon_box_structure(const photonbox::PhotonBoxParams& params,
                                        std::size_t draws, std::uint64_t seed) {
  using namespace photonbox;
  SuiteResult r;
  r.name = "photon_box";
  r.tolerance = 1e-12;
  std::ostringstream detail;
  detail.precision(3);
  Rng rng(seed);

  double worst_column = 0.0;
  for (std::size_t i = 0; i <= draws; ++i) {
    const PhotonBoxParams p = i == 0 ? params : random_photon_box_params(rng, params.n_max);
    try {
      const RealMatrix eta = table1_error_model(p).matrix();
      const double dev = (eta.colwise().sum().array() - 1.0).abs().maxCoeff();
      worst_column = std::max(worst_column, dev);
      record(r, dev, dev > 1e-12);
    } catch (const Error& e) {
      record(r, 0.0, true);
      detail << excerpt(e) << "; ";
    }
  }
  detail << "max column-sum deviation " << worst_column;

  const LOperators ops = l_operators(params);
  const double atom = atom_sector_deficit(ops);
  record(r, atom, atom > 1e-12);
  detail << ", atom-sector deficit " << atom;

  PhotonBoxParams half = params;
  half.epsilon = params.epsilon / 2.0;
  const double full_eps = cavity_sector_deficit(ops).below_truncation;
  const double half_eps = cavity_sector_deficit(l_operators(half)).below_truncation;
  const double ratio = half_eps > 0.0 ? full_eps / half_eps : 0.0;
  const bool ratio_ok = ratio >= 3.5 && ratio <= 4.5;
  ++r.instances;
  if (!ratio_ok) ++r.failures;
  detail << ", cavity deficit ratio " << ratio;

  const ComplexMatrix dalpha = displacement(Complex(0.5, 0.0), params.n_max);
  const double unitarity = max_abs(ComplexMatrix(
      dalpha.adjoint() * dalpha - ComplexMatrix::Identity(dalpha.rows(), dalpha.cols())));
  record(r, 0.0, unitarity > 1e-6);
  const ComplexVector displaced_vacuum = dalpha.col(0);
  const double mean_n =
      (displaced_vacuum.adjoint() * fock_operators(params.n_max).number * displaced_vacuum)(0, 0)
          .real();
  record(r, 0.0, std::abs(mean_n - 0.25) > 1e-6);
  detail << ", displacement unitarity error " << unitarity << ", <n> of D(0.5)|0> = "
         << std::setprecision(12) << mean_n;

  finish(r);
  r.detail = detail.str();
  return r;
}

}  // namespace qfilter
