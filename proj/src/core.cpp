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

#include "qfilter/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qfilter {

namespace {

std::string fmt_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Square root used inside the fidelity. Eigenvalues below the roundoff
// level of the spectrum are treated as exact zeros, otherwise their square
// roots (~1e-8) dominate the error on rank-deficient states.
ComplexMatrix psd_sqrt_for_fidelity(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  RealVector lambda = es.eigenvalues();
  const double top = std::max(lambda.maxCoeff(), 0.0);
  const double cutoff = 32.0 * static_cast<double>(m.rows()) *
                        std::numeric_limits<double>::epsilon() * top;
  for (Index i = 0; i < lambda.size(); ++i) {
    lambda(i) = lambda(i) <= cutoff ? 0.0 : std::sqrt(lambda(i));
  }
  const ComplexMatrix& v = es.eigenvectors();
  return v * lambda.asDiagonal() * v.adjoint();
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
        return false;
      }
    }
  }
  return true;
}

double hermitian_deviation(const ComplexMatrix& m) {
  return max_abs(ComplexMatrix(m - m.adjoint()));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ComplexMatrix matrix_sqrt(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "matrix_sqrt input");
  if (!all_finite(m)) {
    throw Error(ErrorKind::NonFinite, "matrix_sqrt input has NaN/Inf entries");
  }
  const double herm = hermitian_deviation(m);
  if (herm > tol.hermitian) {
    throw Error(ErrorKind::NonHermitianInput,
                "max |M - M^dagger| = " + fmt_value(herm), herm);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  RealVector lambda = es.eigenvalues();
  if (lambda(0) < -tol.psd) {
    throw Error(ErrorKind::NegativeEigenvalue,
                "min eigenvalue " + fmt_value(lambda(0)), lambda(0));
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& v = es.eigenvectors();
  return hermitian_part(v * lambda.asDiagonal() * v.adjoint());
}

DensityOperator DensityOperator::validate(const ComplexMatrix& m,
                                          const Tolerances& tol) {
  require_square(m, "density operator");
  if (!all_finite(m)) {
    throw Error(ErrorKind::NonFinite, "density operator has NaN/Inf entries");
  }
  const double herm = hermitian_deviation(m);
  if (herm > tol.hermitian) {
    throw Error(ErrorKind::NonHermitianInput,
                "max |M - M^dagger| = " + fmt_value(herm), herm);
  }
  ComplexMatrix h = hermitian_part(m);
  const double tr = real_trace(h);
  const double dev = tr - 1.0;
  if (std::abs(dev) > tol.trace) {
    throw Error(ErrorKind::TraceDeviation,
                "trace " + fmt_value(tr) + " deviates from 1 by " +
                    fmt_value(dev),
                dev);
  }
  const double min_eig = hermitian_eigenvalues(h)(0);
  if (min_eig < -tol.psd) {
    throw Error(ErrorKind::NegativeEigenvalue,
                "min eigenvalue " + fmt_value(min_eig), min_eig);
  }
  h /= tr;
  return DensityOperator(std::move(h));
}

DensityOperator DensityOperator::from_cp_output(
    const ComplexMatrix& unnormalized) {
  require_square(unnormalized, "density operator");
  if (!all_finite(unnormalized)) {
    throw Error(ErrorKind::NonFinite, "state update produced NaN/Inf entries");
  }
  ComplexMatrix h = hermitian_part(unnormalized);
  const double tr = real_trace(h);
  if (!(tr > 0.0)) {
    throw Error(ErrorKind::TraceDeviation,
                "state update has non-positive trace " + fmt_value(tr), tr);
  }
  h /= tr;
  return DensityOperator(std::move(h));
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  if (dim <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  }
  return DensityOperator(ComplexMatrix::Identity(dim, dim) /
                         static_cast<double>(dim));
}

DensityOperator DensityOperator::basis_state(Index dim, Index index) {
  if (dim <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  }
  if (index < 0 || index >= dim) {
    throw Error(ErrorKind::IndexOutOfRange,
                "basis index " + std::to_string(index) + " outside [0, " +
                    std::to_string(dim) + ")",
                static_cast<double>(index));
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double norm2 = psi.squaredNorm();
  if (psi.size() == 0 || !(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw Error(ErrorKind::InvalidArgument,
                "pure state vector must be non-empty with finite non-zero norm");
  }
  return DensityOperator(hermitian_part(psi * psi.adjoint() / norm2));
}

DensityOperator validate_density(const ComplexMatrix& m,
                                 const Tolerances& tol) {
  return DensityOperator::validate(m, tol);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "fidelity between dimensions " + std::to_string(rho.dim()) +
                    " and " + std::to_string(sigma.dim()));
  }
  const ComplexMatrix product =
      psd_sqrt_for_fidelity(rho.matrix()) * psd_sqrt_for_fidelity(sigma.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(product);
  const double nuclear = svd.singularValues().sum();
  return std::clamp(nuclear * nuclear, 0.0, 1.0);
}

}  // namespace qfilter
