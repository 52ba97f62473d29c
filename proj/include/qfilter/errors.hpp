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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qfilter {

enum class ErrorKind {
  NonHermitianInput,
  NegativeEigenvalue,
  TraceDeviation,
  NonFinite,
  DimensionMismatch,
  CompletenessViolation,
  ProbabilityDeficit,
  ZeroProbabilityJump,
  NegativeEntry,
  ColumnSumDeviation,
  IndexOutOfRange,
  CombinatorialExplosion,
  ZeroEvidence,
  EnsembleTooSmall,
  BadPartition,
  ParameterOutOfRange,
  InvalidArgument,
  Schema,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind and, where one
/// exists, the magnitude of the offending quantity (deviation, eigenvalue,
/// index, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        message_(what),
        magnitude_(magnitude) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix carried by what().
  const std::string& message() const noexcept { return message_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  ErrorKind kind_;
  std::string message_;
  double magnitude_;
};

}  // namespace qfilter
