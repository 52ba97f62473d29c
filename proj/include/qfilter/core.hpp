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

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "qfilter/errors.hpp"

namespace qfilter {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

struct Tolerances {
  double hermitian = 1e-9;
  double trace = 1e-9;
  double psd = 1e-9;
};

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);
double max_abs(const RealMatrix& m);
bool all_finite(const ComplexMatrix& m);

/// ‖M − M†‖ in the max-norm.
double hermitian_deviation(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Real part of the trace.
double real_trace(const ComplexMatrix& m);

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in [-tol.psd, 0) are clamped to zero before the root is
/// taken. Throws NonHermitianInput or NegativeEigenvalue otherwise.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m, const Tolerances& tol = {});

/// Hermitian, positive semidefinite, unit-trace matrix.
///
/// Instances are immutable. The stored matrix is always exactly Hermitian
/// (re-symmetrized) with trace renormalized to one.
class DensityOperator {
 public:
  /// Full validation: finiteness, Hermiticity, trace and eigenvalue checks.
  static DensityOperator validate(const ComplexMatrix& m,
                                  const Tolerances& tol = {});

  /// For results of completely positive maps applied to valid states, where
  /// positivity holds by construction. Re-symmetrizes and divides by the
  /// trace; checks finiteness and a strictly positive trace but skips the
  /// eigenvalue test.
  static DensityOperator from_cp_output(const ComplexMatrix& unnormalized);

  static DensityOperator maximally_mixed(Index dim);
  static DensityOperator basis_state(Index dim, Index index);
  /// |ψ⟩⟨ψ| / ⟨ψ|ψ⟩.
  static DensityOperator pure(const ComplexVector& psi);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

 private:
  explicit DensityOperator(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

DensityOperator validate_density(const ComplexMatrix& m,
                                 const Tolerances& tol = {});

/// F(ρ, σ) = (tr √(√ρ σ √ρ))², evaluated as the squared trace norm of
/// √ρ·√σ so that F(ρ, σ) and F(σ, ρ) share one set of singular values.
/// Clamped to [0, 1].
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace qfilter
