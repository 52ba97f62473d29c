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

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qfilter/cli/commands.hpp"
#include "qfilter/log.hpp"

namespace {

using namespace qfilter;
using namespace qfilter::cli;

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> tolerances;
  std::vector<std::string> checks;
};

void add_common(CLI::App* cmd, Common& o, bool config_required) {
  auto* cfg = cmd->add_option("--config", o.config, "Experiment config (JSON)");
  if (config_required) cfg->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_option("--seed", o.seed, "Override the config seed")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--tolerance", o.tolerances, "Tolerance override, name=value");
  cmd->add_option("--check", o.checks, "Check to run (repeatable)");
}

ExperimentConfig prepare(const Common& o) {
  ExperimentConfig c = load_config(o.config);
  if (o.seed_set) c.seed = o.seed;
  for (const std::string& t : o.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Schema, "--tolerance expects name=value, got \"" + t + "\"");
    }
    const std::string name = t.substr(0, eq);
    if (!default_tolerances().count(name)) {
      throw Error(ErrorKind::Schema, "--tolerance: unknown tolerance \"" + name + "\"");
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Schema, "--tolerance: bad value in \"" + t + "\"");
    }
    if (!(value > 0.0)) throw Error(ErrorKind::Schema, "--tolerance: must be positive");
    c.tolerances[name] = value;
  }
  for (const std::string& name : o.checks) {
    const auto& known = known_checks();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw Error(ErrorKind::Schema, "--check: unknown check \"" + name + "\"");
    }
  }
  if (!o.checks.empty()) c.checks = o.checks;
  if (!o.out.empty()) c.out = o.out;
  return c;
}

std::string require_out(const ExperimentConfig& c, const char* what) {
  if (c.out.empty()) throw Error(ErrorKind::Schema, std::string("--out is required for ") + what);
  return c.out;
}

int run_filter(const Common& o, const std::string& outcomes, const std::string& filter) {
  const ExperimentConfig c = prepare(o);
  const std::string out = require_out(c, "filter");
  const std::vector<std::size_t> obs = load_outcomes(outcomes);
  write_file(out, filter_output(c, obs, filter));
  std::cerr << "filtered " << obs.size() << " outcomes -> " << out << "\n";
  return kExitOk;
}

int run_simulate(const Common& o, std::size_t n_traj, unsigned workers) {
  ExperimentConfig c = prepare(o);
  if (n_traj > 0) c.n_traj = n_traj;
  if (workers > 0) c.workers = workers;
  const std::string dir = require_out(c, "simulate");
  const SimulationOutput sim = simulate(c);
  const std::filesystem::path base(dir);
  write_file((base / "trajectories.jsonl").string(), sim.trajectories);
  write_file((base / "summary.json").string(), dump(sim.summary));
  for (const auto& [name, text] : sim.columns) write_file((base / name).string(), text);
  if (sim.submartingale) {
    write_file((base / "submartingale.json").string(), dump(*sim.submartingale));
    std::cerr << "submartingale check: " << (sim.checks_passed ? "PASS" : "FAIL") << "\n";
  }
  std::cerr << "simulated " << c.n_traj << " trajectories -> " << dir << "\n";
  return sim.checks_passed ? kExitOk : kExitFailure;
}

int run_verify(const Common& o) {
  const ExperimentConfig c = prepare(o);
  const VerifyReport report = verify(c, c.checks);
  for (const CheckResult& r : report.checks) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (r.details.contains("error")) {
      std::cerr << "  " << r.details["error"]["kind"].get<std::string>() << ": "
                << r.details["error"]["message"].get<std::string>();
    } else if (r.details.contains("detail")) {
      std::cerr << "  " << r.details["detail"].get<std::string>();
    }
    std::cerr << "\n";
  }
  if (!c.out.empty()) write_file(c.out, dump(report.to_json()));
  return report.passed() ? kExitOk : kExitFailure;
}

int run_export(const Common& o, const std::vector<double>& alpha) {
  photonbox::PhotonBoxParams params;
  std::string out = o.out;
  if (!o.config.empty()) {
    const ExperimentConfig c = prepare(o);
    if (c.model.kind != ModelSpec::Kind::PhotonBox) {
      throw Error(ErrorKind::Schema, "photonbox-export needs a photon_box model");
    }
    params = c.model.photon_box;
    out = c.out;
  }
  if (out.empty()) throw Error(ErrorKind::Schema, "--out is required for photonbox-export");
  const Complex a = alpha.size() == 2 ? Complex(alpha[0], alpha[1]) : Complex(0.0, 0.0);
  write_file(out, dump(photonbox_export(params, a)));
  std::cerr << "exported photon-box operators -> " << out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum filtering with imperfect measurements"};
  app.require_subcommand(1);

  Common filter_opts, sim_opts, verify_opts, export_opts;
  std::string outcomes, filter_name;
  std::size_t n_traj = 0;
  unsigned workers = 0;
  std::vector<double> alpha;

  auto* filter = app.add_subcommand("filter", "Run the filter over recorded outcomes");
  add_common(filter, filter_opts, true);
  filter->add_option("--outcomes", outcomes, "Outcome indices (JSON or text)")
      ->required()
      ->check(CLI::ExistingFile);
  filter->add_option("--filter", filter_name, "Configured filter to run");

  auto* sim = app.add_subcommand("simulate", "Simulate an ensemble of trajectories");
  add_common(sim, sim_opts, true);
  sim->add_option("--n-traj", n_traj, "Override the number of trajectories");
  sim->add_option("--workers", workers, "Worker threads (0 = hardware)");

  auto* ver = app.add_subcommand("verify", "Run the verification checks");
  add_common(ver, verify_opts, true);

  auto* exp = app.add_subcommand("photonbox-export", "Dump photon-box operator matrices");
  add_common(exp, export_opts, false);
  exp->add_option("--alpha", alpha, "Displacement amplitude: re im")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*filter) return run_filter(filter_opts, outcomes, filter_name);
    if (*sim) return run_simulate(sim_opts, n_traj, workers);
    if (*ver) return run_verify(verify_opts);
    if (*exp) return run_export(export_opts, alpha);
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << qfilter::io::Json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
