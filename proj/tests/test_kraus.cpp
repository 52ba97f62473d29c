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

#include "qfilter/kraus.hpp"
#include "qfilter/photon_box.hpp"
#include "qfilter/random.hpp"

using namespace qfilter;
using namespace qtest;

namespace {

KrausFamily projective2() { return KrausFamily({projector(2, 0), projector(2, 1)}); }

}  // namespace

TEST_SUITE("kraus") {

TEST_CASE("family construction checks completeness and shapes") {
  CHECK_NOTHROW(KrausFamily({ComplexMatrix::Identity(3, 3)}));
  CHECK(kind_of([] { KrausFamily({projector(2, 0)}); }) == ErrorKind::CompletenessViolation);
  CHECK(kind_of([] { KrausFamily({projector(2, 0), projector(3, 1)}); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { KrausFamily({}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { KrausFamily({ComplexMatrix::Identity(2, 2)}, 1e-10, {"a", "b"}); }) ==
        ErrorKind::InvalidArgument);
  // Approximately complete families pass with a matching tolerance.
  const ComplexMatrix scaled = ComplexMatrix::Identity(2, 2) * std::sqrt(1.0 + 1e-6);
  CHECK(kind_of([&] { KrausFamily({scaled}); }) == ErrorKind::CompletenessViolation);
  const KrausFamily loose({scaled}, 2e-6, {"s"});
  CHECK(loose.completeness_deviation() == doctest::Approx(1e-6).epsilon(1e-6));
  CHECK(loose.label(0) == "s");
}

TEST_CASE("jump_probabilities examples") {
  const KrausFamily id({ComplexMatrix::Identity(2, 2)});
  Rng rng(1);
  const std::vector<double> one = jump_probabilities(id, random_density(2, rng));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> p =
      jump_probabilities(projective2(), validate_density(diag({0.3, 0.7})));
  CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.7).epsilon(1e-15));

  CHECK(kind_of([&] { jump_probabilities(projective2(), DensityOperator::maximally_mixed(3)); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("jump_probabilities on the photon-box family at the vacuum") {
  using namespace photonbox;
  const PhotonBoxParams params;
  const KrausFamily family = composite_kraus(params, 0.0);
  const DensityOperator vacuum = DensityOperator::basis_state(params.dim(), 0);
  const std::vector<double> p = jump_probabilities(family, vacuum);
  REQUIRE(p.size() == kCompositeJumps);
  std::vector<double> direct(kCompositeJumps);
  double total = 0.0;
  for (std::size_t q = 0; q < kCompositeJumps; ++q) {
    const ComplexMatrix& m = family.op(q);
    // tr(M |0><0| M^dagger) = || M e_0 ||^2
    direct[q] = m.col(0).squaredNorm();
    total += direct[q];
  }
  for (std::size_t q = 0; q < kCompositeJumps; ++q) {
    CHECK(std::abs(p[q] - direct[q] / total) < 1e-14);
  }
  // Nothing can be emitted from the vacuum.
  for (std::size_t a = 0; a < kAtomJumps; ++a) {
    CHECK(p[composite_index(static_cast<AtomJump>(a), CavityJump::Plus)] < 1e-30);
  }
}

TEST_CASE("jump_probabilities clamps roundoff and rejects deficits") {
  const std::vector<double> clamped = normalize_probabilities({-5e-13, 1.0}, 1e-10);
  CHECK(clamped[0] == 0.0);
  CHECK(clamped[1] == 1.0);
  CHECK(kind_of([] { normalize_probabilities({-1e-6, 1.0}, 1e-10); }) ==
        ErrorKind::ProbabilityDeficit);
  CHECK(kind_of([] { normalize_probabilities({0.5, 0.49}, 1e-10); }) ==
        ErrorKind::ProbabilityDeficit);
  const std::vector<double> renorm = normalize_probabilities({0.5, 0.5 + 1e-7}, 2e-7);
  CHECK(std::abs(renorm[0] + renorm[1] - 1.0) < 1e-15);
}

TEST_CASE("jump_probabilities sum to one on random families") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.index(5));
    const KrausFamily family(random_kraus_operators(d, 1 + rng.index(5), rng));
    const DensityOperator rho = random_density(d, rng);
    double sum = 0.0;
    for (std::size_t q = 0; q < family.size(); ++q) {
      sum += real_trace(family.op(q) * rho.matrix() * family.op(q).adjoint());
    }
    CHECK(std::abs(sum - 1.0) <= family.completeness_tolerance());
  }
}

TEST_CASE("apply_jump examples") {
  Rng rng(3);
  const KrausFamily id({ComplexMatrix::Identity(3, 3)});
  const DensityOperator rho = random_density(3, rng);
  CHECK(max_diff(apply_jump(id, 0, rho).matrix(), rho.matrix()) < 1e-15);

  const DensityOperator collapsed =
      apply_jump(projective2(), 0, validate_density(diag({0.3, 0.7})));
  CHECK(max_diff(collapsed.matrix(), projector(2, 0)) < 1e-15);

  try {
    apply_jump(projective2(), 1, DensityOperator::basis_state(2, 0));
    FAIL("expected ZeroProbabilityJump");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroProbabilityJump);
    CHECK(e.magnitude() == 0.0);
  }
  CHECK(kind_of([&] { apply_jump(projective2(), 2, DensityOperator::maximally_mixed(2)); }) ==
        ErrorKind::IndexOutOfRange);
}

TEST_CASE("apply_jump outputs are valid states") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.index(5));
    const KrausFamily family(random_kraus_operators(d, 1 + rng.index(4), rng));
    const DensityOperator rho = random_density_of_rank(
        d, 1 + static_cast<Index>(rng.index(static_cast<std::size_t>(d))), rng);
    for (std::size_t q = 0; q < family.size(); ++q) {
      const double w = real_trace(family.op(q) * rho.matrix() * family.op(q).adjoint());
      if (w <= kProbFloor) continue;
      CHECK_NOTHROW(validate_density(apply_jump(family, q, rho).matrix()));
    }
  }
}

TEST_CASE("kraus_map examples") {
  Rng rng(5);
  const KrausFamily id({ComplexMatrix::Identity(2, 2)});
  const DensityOperator rho = random_density(2, rng);
  CHECK(max_diff(kraus_map(id, rho).matrix(), rho.matrix()) < 1e-15);
  const DensityOperator plus = validate_density(mat2(0.5, 0.5, 0.5, 0.5));
  CHECK(max_diff(kraus_map(projective2(), plus).matrix(), diag({0.5, 0.5})) < 1e-15);
}

TEST_CASE("kraus_map is the probability-weighted mixture of jumps") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 1 + static_cast<Index>(rng.index(5));
    const KrausFamily family(random_kraus_operators(d, 1 + rng.index(5), rng));
    const DensityOperator rho = random_density(d, rng);
    const std::vector<double> p = jump_probabilities(family, rho);
    ComplexMatrix mixture = ComplexMatrix::Zero(d, d);
    for (std::size_t q = 0; q < family.size(); ++q) {
      mixture += p[q] * apply_jump(family, q, rho).matrix();
    }
    CHECK(max_diff(kraus_map(family, rho).matrix(), mixture) < 1e-10);
  }
}

}  // TEST_SUITE
