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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfilter/cli/config.hpp"

namespace qfilter::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFailure = 2,
};

/// Exit code for an error escaping a command.
int exit_code_for(const Error& e);
io::Json error_json(const Error& e);

/// Filter trajectory as JSON Lines: a header line holding the initial
/// estimate, then one line per outcome.
std::string filter_output(const ExperimentConfig& config,
                          std::span<const std::size_t> outcomes,
                          const std::string& filter_name = {});

struct SimulationOutput {
  std::string trajectories;
  io::Json summary;
  /// (file name, contents) of the plot-ready fidelity columns.
  std::vector<std::pair<std::string, std::string>> columns;
  std::optional<io::Json> submartingale;
  bool checks_passed = true;
};

SimulationOutput simulate(const ExperimentConfig& config);

/// CSV with header "k,mean_F,se".
std::string fidelity_columns(std::span<const double> mean, std::span<const double> se);

struct CheckResult {
  std::string name;
  bool passed = false;
  io::Json details;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  io::Json to_json() const;
};

/// Checks run when none are requested.
std::vector<std::string> default_verify_checks();

VerifyReport verify(const ExperimentConfig& config, const std::vector<std::string>& checks);

io::Json photonbox_export(const photonbox::PhotonBoxParams& params, Complex alpha);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace qfilter::cli
