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

#include <cmath>
#include <sstream>

#include "support.hpp"

#include "qfilter/cli/commands.hpp"

using namespace qfilter;
using namespace qfilter::cli;
using namespace qtest;

namespace {

std::string source_path(const std::string& rel) { return std::string(QFILTER_SOURCE_DIR) + "/" + rel; }

std::vector<io::Json> lines_of(const std::string& text) {
  std::vector<io::Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(io::Json::parse(line));
  return out;
}

const CheckResult& find_check(const VerifyReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("filter output on the two-level example") {
  const ExperimentConfig c = load_config(source_path("configs/two_level.json"));
  const std::vector<io::Json> lines =
      lines_of(filter_output(c, load_outcomes(source_path("configs/two_level_outcomes.txt"))));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0]["k"] == 1);
  CHECK(lines[0]["filter"] == "hat");
  // Classical Bayes recursion on the diagonal with a 0.9/0.1 readout.
  std::array<double, 2> w{0.5, 0.5};
  const std::array<std::size_t, 3> outcomes{0, 0, 1};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t p = outcomes[k];
    const double like0 = p == 0 ? 0.9 : 0.1;
    const double like1 = p == 0 ? 0.1 : 0.9;
    const double prob = w[0] * like0 + w[1] * like1;
    w = {w[0] * like0 / prob, w[1] * like1 / prob};
    const io::Json& l = lines[k + 1];
    CHECK(l["k"] == k + 2);
    CHECK(l["outcome"] == p);
    CHECK(l["probability"].get<double>() == doctest::Approx(prob).epsilon(1e-14));
    CHECK(l["regularized"] == false);
    const ComplexMatrix est = io::complex_matrix_from_json(l["estimate"]);
    CHECK(max_diff(est, diag({w[0], w[1]})) < 1e-14);
  }
  CHECK(lines[2]["estimate"]["data"][0][0].get<double>() == doctest::Approx(0.81 / 0.82));
  CHECK(lines[3]["estimate"]["data"][0][0].get<double>() == doctest::Approx(0.9));

  const std::vector<io::Json> other = lines_of(filter_output(c, std::vector<std::size_t>{1}, "e"));
  CHECK(other[1]["probability"].get<double>() == doctest::Approx(0.8 * 0.1 + 0.2 * 0.9));
  CHECK(kind_of([&] { filter_output(c, std::vector<std::size_t>{}, "nobody"); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("filter output edge cases") {
  const ExperimentConfig c = load_config(source_path("configs/two_level.json"));
  const std::vector<io::Json> only = lines_of(filter_output(c, std::vector<std::size_t>{}));
  REQUIRE(only.size() == 1);
  CHECK(only[0]["trace"].get<double>() == doctest::Approx(1.0));
  CHECK(kind_of([&] { filter_output(c, std::vector<std::size_t>{0, 2}); }) == ErrorKind::Schema);

  const ExperimentConfig pb = load_config(source_path("configs/photon_box.json"));
  const std::vector<io::Json> lines =
      lines_of(filter_output(pb, load_outcomes(source_path("configs/photon_box_outcomes.txt"))));
  REQUIRE(lines.size() == 51);
  for (const io::Json& l : lines) {
    CHECK(std::abs(l["trace"].get<double>() - 1.0) <= 1e-8);
    const ComplexMatrix est = io::complex_matrix_from_json(l["estimate"]);
    CHECK(std::abs(real_trace(est) - 1.0) <= 1e-8);
    CHECK_NOTHROW(validate_density(est));
  }
}

TEST_CASE("simulate is deterministic and reports fidelity columns") {
  ExperimentConfig c = load_config(source_path("configs/verify_small.json"));
  c.n_traj = 150;
  c.checks = {"submartingale"};
  const SimulationOutput a = simulate(c);
  c.workers = 2;
  const SimulationOutput b = simulate(c);
  CHECK(a.trajectories == b.trajectories);
  CHECK(a.summary.dump() == b.summary.dump());
  CHECK(lines_of(a.trajectories).size() == 150);
  CHECK(a.summary["n_traj"] == 150);
  std::size_t total = 0;
  for (const auto& n : a.summary["first_outcome_counts"]) total += n.get<std::size_t>();
  CHECK(total == 150);
  REQUIRE(a.columns.size() == 1);
  CHECK(a.columns[0].first == "fidelity_hat_e.csv");
  std::istringstream csv(a.columns[0].second);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k,mean_F,se");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == c.horizon + 1);
  REQUIRE(a.submartingale.has_value());
  CHECK((*a.submartingale)["passes"] == true);
  CHECK(a.checks_passed);

  c.seed += 1;
  CHECK(simulate(c).trajectories != a.trajectories);
  c.filters.clear();
  c.fidelity_pairs.clear();
  CHECK(kind_of([&] { simulate(c); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("fidelity columns carry 17 significant digits") {
  const std::vector<double> mean{1.0 / 3.0};
  const std::vector<double> se{2.0 / 3.0};
  const std::string csv = fidelity_columns(mean, se);
  const std::string row = csv.substr(csv.find('\n') + 1);
  CHECK(std::stod(row.substr(2)) == 1.0 / 3.0);
  CHECK(std::stod(row.substr(row.rfind(',') + 1)) == 2.0 / 3.0);
}

TEST_CASE("verify passes on the small config") {
  const ExperimentConfig c = load_config(source_path("configs/verify_small.json"));
  const VerifyReport r = verify(c, default_verify_checks());
  for (const CheckResult& check : r.checks) CHECK_MESSAGE(check.passed, check.name << ": " << check.details.dump());
  CHECK(r.passed());
  CHECK(r.checks.size() == default_verify_checks().size());
  CHECK(r.to_json()["passed"] == true);
}

TEST_CASE("verify reports a corrupt error model") {
  const ExperimentConfig c = load_config(source_path("tests/data/corrupt_eta.json"));
  const VerifyReport r = verify(c, {"model", "oracle", "ideal_limit"});
  CHECK_FALSE(find_check(r, "model").passed);
  CHECK(find_check(r, "model").details["error"]["kind"] == "ColumnSumDeviation");
  CHECK_FALSE(find_check(r, "oracle").passed);
  CHECK(find_check(r, "ideal_limit").passed);
  CHECK_FALSE(r.passed());
}

TEST_CASE("verify reports the enumeration guard") {
  const ExperimentConfig c = load_config(source_path("tests/data/oracle_guard.json"));
  const VerifyReport r = verify(c, c.checks);
  const CheckResult& o = find_check(r, "oracle");
  CHECK_FALSE(o.passed);
  CHECK(o.details["error"]["kind"] == "CombinatorialExplosion");
  CHECK(o.details["error"]["message"].get<std::string>().find("suggested max k = 4") !=
        std::string::npos);
  CHECK(o.details["error"]["magnitude"] == 4.0);
}

TEST_CASE("photon-box export") {
  photonbox::PhotonBoxParams p;
  p.n_max = 4;
  const io::Json j = photonbox_export(p, Complex(0.2, 0.1));
  CHECK(j["dim"] == 5);
  CHECK(j["kraus"]["operators"].size() == 21);
  CHECK(j["eta"]["rows"] == 6);
  CHECK(j["eta"]["cols"] == 21);
  CHECK(j["detections"].size() == 6);
  CHECK(j["atom_sector_deficit"].get<double>() <= 1e-12);
  const ComplexMatrix d = io::complex_matrix_from_json(j["displacement"]);
  CHECK(max_diff(d, photonbox::displacement(Complex(0.2, 0.1), 4)) == 0.0);
}

TEST_CASE("error mapping") {
  CHECK(exit_code_for(Error(ErrorKind::Schema, "x")) == kExitUsage);
  CHECK(exit_code_for(Error(ErrorKind::ColumnSumDeviation, "x")) == kExitUsage);
  CHECK(exit_code_for(Error(ErrorKind::ZeroEvidence, "x")) == kExitFailure);
  CHECK(exit_code_for(Error(ErrorKind::CombinatorialExplosion, "x")) == kExitFailure);
  const io::Json j = error_json(Error(ErrorKind::TraceDeviation, "trace is 1.1", 0.1));
  CHECK(j["error"]["kind"] == "TraceDeviation");
  CHECK(j["error"]["message"] == "trace is 1.1");
  CHECK(j["error"]["magnitude"] == 0.1);
}

}  // TEST_SUITE
