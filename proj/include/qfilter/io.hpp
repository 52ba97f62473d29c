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

#include <string>

#include "json.hpp"

#include "qfilter/filter.hpp"
#include "qfilter/photon_box.hpp"
#include "qfilter/simulator.hpp"
#include "qfilter/stats.hpp"

// JSON encodings shared by the CLI and the tests.
//
// Complex matrices:  {"rows": r, "cols": c, "data": [[re, im], ...]}
// Real matrices:     {"rows": r, "cols": c, "data": [x, ...]}
// Both row-major with exactly r·c entries.

namespace qfilter::io {

using Json = nlohmann::ordered_json;

/// Throws Error{Schema} naming the JSON path.
[[noreturn]] void schema_error(const std::string& path, const std::string& what);

const Json& require(const Json& obj, const char* key, const std::string& path);

Json to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const Json& j, const std::string& path = "");

Json to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const Json& j, const std::string& path = "");

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& path = "");

/// {"completeness_tolerance": t, "operators": [{"label": l, "matrix": M}]}
Json to_json(const KrausFamily& family);
KrausFamily kraus_family_from_json(const Json& j, const std::string& path = "");

Json to_json(const ErrorModel& model);
ErrorModel error_model_from_json(const Json& j, const std::string& path = "");

Json to_json(const photonbox::PhotonBoxParams& params);
/// Missing keys keep their defaults.
photonbox::PhotonBoxParams photon_box_params_from_json(const Json& j,
                                                       const std::string& path = "");

Json to_json(const TrajectoryRecord& record);
Json to_json(const SubmartingaleReport& report);
Json to_json(const InequalityCheck& check);
Json to_json(const OneStepCheck& check);

std::string to_string(OutcomeFeed feed);
OutcomeFeed outcome_feed_from_string(const std::string& s, const std::string& path);

}  // namespace qfilter::io
