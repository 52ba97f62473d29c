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

#include <cmath>

#include "support.hpp"

#include "qfilter/random.hpp"
#include "qfilter/stats.hpp"
#include "qfilter/verification.hpp"

using namespace qfilter;
using namespace qtest;

namespace {

MeasurementStep projective(const RealMatrix& eta) {
  return MeasurementStep(KrausFamily({projector(2, 0), projector(2, 1)}),
                         ErrorModel::validate(eta));
}

MeasurementStep random_step(Rng& rng, Index d) {
  const std::size_t mi = 2 + rng.index(3);
  return MeasurementStep(KrausFamily(random_kraus_operators(d, mi, rng)),
                         ErrorModel::validate(random_stochastic_matrix(
                             2 + static_cast<Index>(rng.index(3)),
                             static_cast<Index>(mi), rng)));
}

TrajectoryConfig pair_config(const DensityOperator& truth, const DensityOperator& other,
                             std::size_t horizon) {
  RealMatrix eta(2, 2);
  eta << 0.8, 0.3, 0.2, 0.7;
  return TrajectoryConfig{.true_initial = truth,
                          .filters = {FilterSpec{"hat", truth, OutcomeFeed::Truth},
                                      FilterSpec{"e", other, OutcomeFeed::Truth}},
                          .steps = {projective(eta)},
                          .generator = {},
                          .horizon = horizon,
                          .seed = 0,
                          .fidelity_pairs = {{0, 1}},
                          .store_states = false};
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("exact one-step check with equal states") {
  Rng rng(1);
  const DensityOperator rho = random_density(3, rng);
  const OneStepCheck c = exact_one_step_submartingale(rho, rho, random_step(rng, 3));
  CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.holds);
}

TEST_CASE("exact one-step check on the 2x2 projective example") {
  const MeasurementStep step = projective(RealMatrix::Identity(2, 2));
  const DensityOperator rho_hat = validate_density(diag({0.3, 0.7}));
  const DensityOperator rho_e = DensityOperator::maximally_mixed(2);
  const OneStepCheck c = exact_one_step_submartingale(rho_hat, rho_e, step);
  const double lhs = std::pow(std::sqrt(0.15) + std::sqrt(0.35), 2);
  CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.slack == doctest::Approx(1.0 - lhs).epsilon(1e-10));
  CHECK(c.slack > 0.04);

  // Noisy readout: each posterior is a classical Bayes update.
  RealMatrix eta(2, 2);
  eta << 0.9, 0.1, 0.1, 0.9;
  const OneStepCheck noisy = exact_one_step_submartingale(rho_hat, rho_e, projective(eta));
  double rhs = 0.0;
  for (int p = 0; p < 2; ++p) {
    const double h0 = 0.3 * eta(p, 0), h1 = 0.7 * eta(p, 1);
    const double e0 = 0.5 * eta(p, 0), e1 = 0.5 * eta(p, 1);
    const double w = h0 + h1;
    const double f = std::pow(std::sqrt(h0 / w * e0 / (e0 + e1)) +
                                  std::sqrt(h1 / w * e1 / (e0 + e1)), 2);
    rhs += w * f;
  }
  CHECK(noisy.rhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(noisy.holds);
}

TEST_CASE("exact one-step check on random instances") {
  Rng rng(2024);
  double worst = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const DensityOperator rho_hat = random_density(d, rng);
    const DensityOperator rho_e =
        i % 3 == 0 ? random_density_of_rank(d, 1, rng) : random_density(d, rng);
    const OneStepCheck c = exact_one_step_submartingale(rho_hat, rho_e, random_step(rng, d));
    worst = std::min(worst, c.slack);
    CHECK(c.holds);
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("fidelity inequality special cases") {
  Rng rng(3);
  const std::vector<ComplexMatrix> ops = random_kraus_operators(3, 4, rng);
  const DensityOperator rho = random_density(3, rng);
  const DensityOperator sigma = random_density(3, rng);

  const InequalityCheck trivial = check_fidelity_inequality(ops, {{0, 1, 2, 3}}, rho, sigma);
  ComplexMatrix a = ComplexMatrix::Zero(3, 3), b = ComplexMatrix::Zero(3, 3);
  for (const ComplexMatrix& l : ops) {
    a += l * rho.matrix() * l.adjoint();
    b += l * sigma.matrix() * l.adjoint();
  }
  CHECK(trivial.rhs == doctest::Approx(fidelity_by_eigen(a, b)).epsilon(1e-9));
  CHECK(trivial.slack >= -1e-12);
  CHECK(trivial.weights[0] == doctest::Approx(1.0));

  const InequalityCheck same = check_fidelity_inequality(ops, {{0, 2}, {1}, {3}}, rho, rho);
  CHECK(same.lhs == doctest::Approx(1.0).epsilon(1e-12));
  double total = 0.0;
  for (double w : same.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (double f : same.part_fidelities) CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(same.slack) < 1e-9);
}

TEST_CASE("fidelity inequality on random instances") {
  Rng rng(77);
  std::size_t regularized = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const std::size_t s = 1 + rng.index(8);
    const std::vector<ComplexMatrix> ops = random_kraus_operators(d, s, rng);
    std::vector<std::size_t> order(s);
    for (std::size_t k = 0; k < s; ++k) order[k] = k;
    for (std::size_t k = s; k > 1; --k) std::swap(order[k - 1], order[rng.index(k)]);
    const std::size_t parts = 1 + rng.index(s);
    std::vector<std::vector<std::size_t>> partition(parts);
    for (std::size_t k = 0; k < s; ++k) partition[k < parts ? k : rng.index(parts)].push_back(order[k]);
    const DensityOperator rho = random_density(d, rng);
    const DensityOperator sigma = i % 4 == 0 ? random_density_of_rank(d, 1, rng)
                                             : random_density(d, rng);
    const InequalityCheck c = check_fidelity_inequality(ops, partition, rho, sigma);
    regularized += c.regularized_parts.size();
    CHECK(c.slack >= -1e-9);
  }
  MESSAGE("regularized parts: " << regularized);
}

TEST_CASE("fidelity inequality rejects bad inputs") {
  Rng rng(4);
  const std::vector<ComplexMatrix> ops = random_kraus_operators(2, 3, rng);
  const DensityOperator rho = random_density(2, rng);
  auto run = [&](std::vector<std::vector<std::size_t>> part) {
    return kind_of([&] { check_fidelity_inequality(ops, part, rho, rho); });
  };
  CHECK(run({{0, 1}}) == ErrorKind::BadPartition);
  CHECK(run({{0, 1}, {1, 2}}) == ErrorKind::BadPartition);
  CHECK(run({{0, 1, 2}, {}}) == ErrorKind::BadPartition);
  CHECK(run({{0, 1, 2, 3}}) == ErrorKind::BadPartition);
  std::vector<ComplexMatrix> scaled = ops;
  scaled[0] *= 1.1;
  CHECK(kind_of([&] { check_fidelity_inequality(scaled, {{0, 1, 2}}, rho, rho); }) ==
        ErrorKind::CompletenessViolation);
  const std::vector<ComplexMatrix> with_zero{projector(2, 0), projector(2, 1),
                                             ComplexMatrix::Zero(2, 2)};
  CHECK(kind_of([&] { check_fidelity_inequality(with_zero, {{0, 1, 2}}, rho, rho); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] {
          check_fidelity_inequality(ops, {{0, 1, 2}}, rho, random_density(3, rng));
        }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("one-step check is the inequality on the coarse operators") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const MeasurementStep step = random_step(rng, d);
    const DensityOperator rho_hat = random_density(d, rng);
    const DensityOperator rho_e = random_density(d, rng);
    std::vector<ComplexMatrix> ops;
    std::vector<std::vector<std::size_t>> partition;
    for (std::size_t p = 0; p < step.m_real(); ++p) {
      std::vector<std::size_t> part;
      for (std::size_t q = 0; q < step.m_ideal(); ++q) {
        const double w = step.errors()(static_cast<Index>(p), static_cast<Index>(q));
        if (w == 0.0) continue;
        part.push_back(ops.size());
        ops.push_back(std::sqrt(w) * step.family().op(q));
      }
      if (!part.empty()) partition.push_back(std::move(part));
    }
    const OneStepCheck exact = exact_one_step_submartingale(rho_hat, rho_e, step);
    const InequalityCheck ineq = check_fidelity_inequality(ops, partition, rho_hat, rho_e);
    CHECK(std::abs(exact.lhs - ineq.lhs) <= 1e-10);
    CHECK(std::abs(exact.rhs - ineq.rhs) <= 1e-10);
  }
}

TEST_CASE("ensemble report with matched initial states") {
  const DensityOperator truth = validate_density(diag({0.4, 0.6}));
  const auto records = run_ensemble(pair_config(truth, truth, 10), 200, 1);
  const SubmartingaleReport r = ensemble_submartingale(records);
  CHECK(r.asserted);
  CHECK(r.passes);
  for (double f : r.mean_fidelity) CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.mean_fidelity.size() == 11);
}

TEST_CASE("ensemble report with a mismatched initial estimate") {
  const DensityOperator truth = validate_density(diag({0.4, 0.6}));
  const DensityOperator other = validate_density(diag({0.95, 0.05}));
  TrajectoryConfig cfg = pair_config(truth, other, 12);
  cfg.exact_increments = true;
  const auto records = run_ensemble(cfg, 500, 9);
  const SubmartingaleReport r = ensemble_submartingale(records);
  CHECK(r.asserted);
  CHECK(r.passes);
  CHECK(r.exact_checks == 500 * 12);
  CHECK(r.exact_violations == 0);
  CHECK(r.final_exceeds_initial);
  CHECK(r.steps.size() == 12);
  for (const StepStatistics& s : r.steps) CHECK(s.mean_exact_increment >= -1e-9);
}

TEST_CASE("ensemble report preconditions") {
  const DensityOperator truth = validate_density(diag({0.4, 0.6}));
  const DensityOperator other = DensityOperator::maximally_mixed(2);
  CHECK(kind_of([&] {
          const auto few = run_ensemble(pair_config(truth, other, 3), 99, 1);
          ensemble_submartingale(few);
        }) == ErrorKind::EnsembleTooSmall);

  TrajectoryConfig shuffled = pair_config(truth, other, 5);
  shuffled.filters[1].feed = OutcomeFeed::Shuffled;
  const SubmartingaleReport s = ensemble_submartingale(run_ensemble(shuffled, 100, 1));
  CHECK_FALSE(s.asserted);
  CHECK_FALSE(s.passes);
  CHECK(!s.note.empty());

  TrajectoryConfig wrong = pair_config(truth, other, 5);
  wrong.filters[0].initial = other;
  const SubmartingaleReport w = ensemble_submartingale(run_ensemble(wrong, 100, 1));
  CHECK_FALSE(w.asserted);
}

TEST_CASE("verification suites") {
  const SuiteResult sub = verify_exact_submartingale(300, 5, 1e-9);
  CHECK_MESSAGE(sub.passed, sub.detail);
  const SuiteResult ineq = verify_inequality(300, 6, 1e-9);
  CHECK_MESSAGE(ineq.passed, ineq.detail);
}

}  // TEST_SUITE
