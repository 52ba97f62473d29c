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

#include "qfilter/error_model.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace qfilter {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ErrorModel ErrorModel::validate(const RealMatrix& eta) {
  if (eta.rows() == 0 || eta.cols() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "error model matrix is empty");
  }
  for (Index q = 0; q < eta.cols(); ++q) {
    double sum = 0.0;
    for (Index p = 0; p < eta.rows(); ++p) {
      const double v = eta(p, q);
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::NonFinite,
                    "eta(" + std::to_string(p) + "," + std::to_string(q) +
                        ") is not finite");
      }
      if (v < 0.0) {
        throw Error(ErrorKind::NegativeEntry,
                    "eta(" + std::to_string(p) + "," + std::to_string(q) +
                        ") = " + fmt(v),
                    v);
      }
      sum += v;
    }
    const double dev = sum - 1.0;
    if (std::abs(dev) > kColumnSumTolerance) {
      throw Error(ErrorKind::ColumnSumDeviation,
                  "column " + std::to_string(q) + " sums to 1 " +
                      (dev < 0 ? "- " : "+ ") + fmt(std::abs(dev)),
                  dev);
    }
  }
  return ErrorModel(eta);
}

ErrorModel ErrorModel::identity(Index m) {
  if (m <= 0) {
    throw Error(ErrorKind::DimensionMismatch, "outcome count must be positive");
  }
  return ErrorModel(RealMatrix::Identity(m, m));
}

std::size_t sample_real_outcome(const ErrorModel& model, std::size_t q,
                                Rng& rng) {
  if (q >= static_cast<std::size_t>(model.m_ideal())) {
    throw Error(ErrorKind::IndexOutOfRange,
                "ideal outcome " + std::to_string(q) + " outside [0, " +
                    std::to_string(model.m_ideal()) + ")",
                static_cast<double>(q));
  }
  const RealVector column = model.matrix().col(static_cast<Index>(q));
  return sample_discrete(std::span<const double>(column.data(), column.size()),
                         rng);
}

}  // namespace qfilter
