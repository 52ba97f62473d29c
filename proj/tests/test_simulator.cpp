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

#include "support.hpp"

#include "qfilter/io.hpp"
#include "qfilter/photon_box.hpp"
#include "qfilter/random.hpp"
#include "qfilter/simulator.hpp"

using namespace qfilter;
using namespace qtest;

namespace {

MeasurementStep projective_step(double e) {
  RealMatrix eta(2, 2);
  eta << 1.0 - e, e, e, 1.0 - e;
  return MeasurementStep(KrausFamily({projector(2, 0), projector(2, 1)}),
                         ErrorModel::validate(eta));
}

TrajectoryConfig two_filter_config(const MeasurementStep& step, const DensityOperator& truth,
                                   std::size_t horizon, std::uint64_t seed) {
  return TrajectoryConfig{.true_initial = truth,
                          .filters = {FilterSpec{"hat", truth, OutcomeFeed::Truth},
                                      FilterSpec{"e", DensityOperator::maximally_mixed(truth.dim()),
                                                 OutcomeFeed::Truth}},
                          .steps = {step},
                          .generator = {},
                          .horizon = horizon,
                          .seed = seed,
                          .fidelity_pairs = {{0, 1}}};
}

std::string serialize(const std::vector<TrajectoryRecord>& records) {
  std::string out;
  for (const TrajectoryRecord& r : records) out += io::to_json(r).dump() + "\n";
  return out;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("step_truth with a trivial family") {
  Rng rng(1);
  const MeasurementStep step(KrausFamily({ComplexMatrix::Identity(2, 2)}),
                             ErrorModel::validate(RealMatrix::Constant(2, 1, 0.5)));
  const DensityOperator rho = random_density(2, rng);
  for (int i = 0; i < 50; ++i) {
    const TruthStep t = step_truth(rho, step, rng);
    CHECK(t.ideal == 0);
    CHECK(max_diff(t.next.matrix(), rho.matrix()) < 1e-15);
  }
}

TEST_CASE("Fock eigenstates are fixed points of projective measurement") {
  Rng rng(2);
  const MeasurementStep step = projective_step(0.2);
  DensityOperator rho = DensityOperator::basis_state(2, 0);
  for (int i = 0; i < 50; ++i) {
    TruthStep t = step_truth(rho, step, rng);
    CHECK(t.ideal == 0);
    rho = t.next;
    CHECK(max_diff(rho.matrix(), projector(2, 0)) < 1e-15);
  }
}

TEST_CASE("ideal outcomes follow the jump law") {
  Rng rng(3);
  const MeasurementStep step = projective_step(0.1);
  const DensityOperator rho = validate_density(diag({0.3, 0.7}));
  std::size_t zeros = 0;
  const std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) zeros += step_truth(rho, step, rng).ideal == 0;
  CHECK(within_3_sigma(zeros, n, 0.3));
}

TEST_CASE("perfect projective observation tracks the truth") {
  const MeasurementStep step(KrausFamily({projector(2, 0), projector(2, 1)}),
                             ErrorModel::identity(2));
  const DensityOperator truth = validate_density(diag({0.4, 0.6}));
  TrajectoryConfig cfg = two_filter_config(step, truth, 10, 5);
  cfg.store_states = true;
  const TrajectoryRecord rec = run_trajectory(cfg);
  for (const StepRecord& s : rec.steps) {
    REQUIRE(s.truth.has_value());
    CHECK(s.ideal == s.real);
    CHECK(max_diff(s.estimates[0].matrix(), s.truth->matrix()) < 1e-15);
  }
}

TEST_CASE("records are valid and the matched filter is always well defined") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.index(3));
    const std::size_t mi = 2 + rng.index(3);
    const MeasurementStep step(KrausFamily(random_kraus_operators(d, mi, rng)),
                               ErrorModel::validate(random_stochastic_matrix(
                                   2 + static_cast<Index>(rng.index(2)),
                                   static_cast<Index>(mi), rng)));
    TrajectoryConfig cfg = two_filter_config(step, random_density_of_rank(d, 1, rng), 15,
                                             static_cast<std::uint64_t>(trial));
    cfg.store_states = true;
    const TrajectoryRecord rec = run_trajectory(cfg);
    REQUIRE(rec.steps.size() == 15);
    REQUIRE(rec.initialized_at_truth == std::vector<std::uint8_t>{1, 0});
    for (const StepRecord& s : rec.steps) {
      CHECK(s.regularized[0] == 0);
      CHECK_NOTHROW(validate_density(s.truth->matrix()));
      for (const DensityOperator& e : s.estimates) {
        CHECK_NOTHROW(validate_density(e.matrix()));
        CHECK(std::abs(real_trace(e.matrix()) - 1.0) < 1e-12);
      }
      REQUIRE(s.fidelities.size() == 1);
      CHECK(s.fidelities[0] >= 0.0);
      CHECK(s.fidelities[0] <= 1.0);
      double total = 0.0;
      for (double p : s.predicted) total += p;
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("a filter started at the truth has unit self-fidelity") {
  const MeasurementStep step = projective_step(0.2);
  const DensityOperator truth = DensityOperator::maximally_mixed(2);
  TrajectoryConfig cfg{.true_initial = truth,
                       .filters = {FilterSpec{"a", truth, OutcomeFeed::Truth},
                                   FilterSpec{"b", truth, OutcomeFeed::Truth}},
                       .steps = {step},
                       .generator = {},
                       .horizon = 20,
                       .seed = 9,
                       .fidelity_pairs = {{0, 1}}};
  const TrajectoryRecord rec = run_trajectory(cfg);
  for (double f : rec.fidelity_series(0)) CHECK(f == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ensembles are deterministic and seeded per trajectory") {
  const MeasurementStep step = projective_step(0.15);
  const TrajectoryConfig cfg = two_filter_config(step, DensityOperator::maximally_mixed(2), 8, 0);
  const auto a = run_ensemble(cfg, 20, 100, 1);
  const auto b = run_ensemble(cfg, 20, 100, 3);
  CHECK(serialize(a) == serialize(b));
  TrajectoryConfig single = cfg;
  single.seed = 105;
  CHECK(io::to_json(run_trajectory(single)).dump() == io::to_json(a[5]).dump());
  const auto one = run_ensemble(cfg, 1, 100);
  single.seed = 100;
  CHECK(io::to_json(one[0]).dump() == io::to_json(run_trajectory(single)).dump());
  const auto c = run_ensemble(cfg, 20, 101, 1);
  CHECK(serialize(a) != serialize(c));
  CHECK(kind_of([&] { run_ensemble(cfg, 0, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("first outcome frequencies match the predicted law on the 2x2 model") {
  const MeasurementStep step = projective_step(0.1);
  const DensityOperator truth = validate_density(diag({0.3, 0.7}));
  const TrajectoryConfig cfg = two_filter_config(step, truth, 1, 0);
  const std::size_t n = 10000;
  const auto records = run_ensemble(cfg, n, 77);
  const double p0 = records.front().steps.front().predicted[0];
  CHECK(p0 == doctest::Approx(0.3 * 0.9 + 0.7 * 0.1).epsilon(1e-14));
  std::size_t zeros = 0;
  for (const TrajectoryRecord& r : records) zeros += r.steps.front().real == 0;
  CHECK(within_3_sigma(zeros, n, p0));
}

TEST_CASE("feedback generator sees the lead estimate") {
  using namespace photonbox;
  PhotonBoxParams params;
  params.n_max = 6;
  const PhotonBoxModel model(params);
  std::vector<std::size_t> seen;
  TrajectoryConfig cfg{.true_initial = coherent_state(1.0, params.n_max),
                       .filters = {FilterSpec{"hat", coherent_state(1.0, params.n_max),
                                              OutcomeFeed::Truth}},
                       .steps = {},
                       .generator =
                           [&](std::size_t k, const DensityOperator& lead) {
                             seen.push_back(k);
                             CHECK(lead.dim() == params.dim());
                             return model.step(Complex(0.05 * static_cast<double>(k), 0.0));
                           },
                       .horizon = 5,
                       .seed = 3,
                       .fidelity_pairs = {}};
  const TrajectoryRecord rec = run_trajectory(cfg);
  CHECK(seen == std::vector<std::size_t>{1, 2, 3, 4, 5});
  CHECK(rec.steps.size() == 5);
  cfg.filters.push_back(FilterSpec{"x", cfg.true_initial, OutcomeFeed::Shuffled});
  CHECK(kind_of([&] { run_trajectory(cfg); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("shuffled feeds permute the realized outcome stream") {
  const MeasurementStep step = projective_step(0.2);
  const DensityOperator truth = DensityOperator::maximally_mixed(2);
  TrajectoryConfig cfg = two_filter_config(step, truth, 30, 4);
  cfg.filters[1].feed = OutcomeFeed::Shuffled;
  cfg.filters[1].initial = truth;
  const TrajectoryRecord rec = run_trajectory(cfg);
  CHECK(rec.feeds[1] == OutcomeFeed::Shuffled);
  // Same multiset of outcomes, so the final diagonal Bayes posterior agrees.
  cfg.store_states = true;
  const TrajectoryRecord full = run_trajectory(cfg);
  CHECK(max_diff(full.steps.back().estimates[0].matrix(),
                 full.steps.back().estimates[1].matrix()) < 1e-12);
}

TEST_CASE("configuration errors") {
  const MeasurementStep step = projective_step(0.2);
  TrajectoryConfig cfg = two_filter_config(step, DensityOperator::maximally_mixed(2), 3, 0);
  cfg.horizon = 0;
  CHECK(kind_of([&] { run_trajectory(cfg); }) == ErrorKind::InvalidArgument);
  cfg.horizon = 3;
  cfg.steps = {step, step};
  CHECK(kind_of([&] { run_trajectory(cfg); }) == ErrorKind::DimensionMismatch);
  cfg.steps = {step};
  cfg.fidelity_pairs = {{0, 2}};
  CHECK(kind_of([&] { run_trajectory(cfg); }) == ErrorKind::IndexOutOfRange);
  cfg.fidelity_pairs = {};
  cfg.filters[1].initial = DensityOperator::maximally_mixed(3);
  CHECK(kind_of([&] { run_trajectory(cfg); }) == ErrorKind::DimensionMismatch);
}

}  // TEST_SUITE
