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

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "qfilter/core.hpp"
#include "qfilter/errors.hpp"

namespace qtest {

using qfilter::Complex;
using qfilter::ComplexMatrix;
using qfilter::ComplexVector;
using qfilter::Index;

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(values.size()),
                                        static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline ComplexMatrix projector(Index dim, Index i) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(i, i) = 1.0;
  return m;
}

inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline qfilter::ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qfilter::Error& e) {
    return e.kind();
  }
  FAIL("expected a qfilter::Error");
  return qfilter::ErrorKind::InvalidArgument;
}

/// Fidelity through the eigendecomposition of √ρ σ √ρ.
inline double fidelity_by_eigen(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix s = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  const ComplexMatrix inner = s * sigma * s;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es2(0.5 * (inner + inner.adjoint()));
  const double t = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return t * t;
}

/// Binomial 3σ band check for `hits` successes in `n` trials at rate p.
inline bool within_3_sigma(std::size_t hits, std::size_t n, double p) {
  const double nn = static_cast<double>(n);
  const double sigma = std::sqrt(nn * p * (1.0 - p));
  return std::abs(static_cast<double>(hits) - nn * p) <= 3.0 * sigma + 1e-12;
}

}  // namespace qtest
