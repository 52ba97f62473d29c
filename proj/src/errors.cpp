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

#include "qfilter/errors.hpp"

#include <iostream>
#include <mutex>

#include "qfilter/log.hpp"

namespace qfilter {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::TraceDeviation: return "TraceDeviation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CompletenessViolation: return "CompletenessViolation";
    case ErrorKind::ProbabilityDeficit: return "ProbabilityDeficit";
    case ErrorKind::ZeroProbabilityJump: return "ZeroProbabilityJump";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::ColumnSumDeviation: return "ColumnSumDeviation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CombinatorialExplosion: return "CombinatorialExplosion";
    case ErrorKind::ZeroEvidence: return "ZeroEvidence";
    case ErrorKind::EnsembleTooSmall: return "EnsembleTooSmall";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Schema: return "SchemaError";
  }
  return "Unknown";
}

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s;
  return s;
}

}  // namespace

void set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex());
  sink() = std::move(s);
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) {
    sink()(message);
  } else {
    std::cerr << "qfilter warning: " << message << '\n';
  }
}

}  // namespace qfilter
