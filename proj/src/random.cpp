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

#include "qfilter/random.hpp"

#include <cmath>
#include <numbers>

namespace qfilter {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorKind::InvalidArgument, "Rng::index needs n > 0");
  }
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::size_t sample_discrete(std::span<const double> probabilities, Rng& rng) {
  if (probabilities.empty()) {
    throw Error(ErrorKind::InvalidArgument, "empty probability vector");
  }
  std::size_t last_positive = probabilities.size();
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0.0) {
      last_positive = i;
      break;
    }
  }
  if (last_positive == probabilities.size()) {
    throw Error(ErrorKind::ProbabilityDeficit,
                "probability vector has no positive entry");
  }
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < last_positive; ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

ComplexMatrix random_complex_gaussian(Index rows, Index cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  // Fill row-major so the stream order does not depend on Eigen's storage.
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) g(r, c) = rng.complex_normal();
  }
  return g;
}

DensityOperator random_density(Index dim, Rng& rng) {
  const ComplexMatrix g = random_complex_gaussian(dim, dim, rng);
  return DensityOperator::from_cp_output(g * g.adjoint());
}

DensityOperator random_density_of_rank(Index dim, Index rank, Rng& rng) {
  if (rank < 1 || rank > dim) {
    throw Error(ErrorKind::InvalidArgument, "rank must lie in [1, dim]");
  }
  const ComplexMatrix g = random_complex_gaussian(dim, rank, rng);
  return DensityOperator::from_cp_output(g * g.adjoint());
}

DensityOperator random_pure_state(Index dim, Rng& rng) {
  ComplexVector psi(dim);
  for (Index i = 0; i < dim; ++i) psi(i) = rng.complex_normal();
  return DensityOperator::pure(psi);
}

ComplexMatrix random_unitary(Index dim, Rng& rng) {
  const ComplexMatrix g = random_complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  // Fix the phases of R's diagonal so the distribution is Haar.
  const ComplexMatrix& r = qr.matrixQR();
  for (Index i = 0; i < dim; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

std::vector<ComplexMatrix> random_kraus_operators(Index dim, std::size_t count,
                                                  Rng& rng) {
  if (count == 0 || dim <= 0) {
    throw Error(ErrorKind::InvalidArgument,
                "need at least one operator of positive dimension");
  }
  const Index tall = dim * static_cast<Index>(count);
  const ComplexMatrix stacked = random_complex_gaussian(tall, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(stacked);
  const ComplexMatrix isometry =
      qr.householderQ() * ComplexMatrix::Identity(tall, dim);
  std::vector<ComplexMatrix> ops;
  ops.reserve(count);
  for (std::size_t q = 0; q < count; ++q) {
    ops.emplace_back(isometry.block(static_cast<Index>(q) * dim, 0, dim, dim));
  }
  return ops;
}

RealMatrix random_stochastic_matrix(Index m_real, Index m_ideal, Rng& rng) {
  RealMatrix eta(m_real, m_ideal);
  for (Index q = 0; q < m_ideal; ++q) {
    double sum = 0.0;
    for (Index p = 0; p < m_real; ++p) {
      eta(p, q) = -std::log(1.0 - rng.uniform());  // exponential -> Dirichlet
      sum += eta(p, q);
    }
    eta.col(q) /= sum;
  }
  return eta;
}

}  // namespace qfilter
