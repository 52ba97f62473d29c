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

#include "qfilter/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "qfilter/stats.hpp"

namespace qfilter {

namespace {

constexpr std::uint64_t kShuffleStream = 0x53485546464C4531ULL;

void validate_config(const TrajectoryConfig& cfg) {
  if (cfg.horizon < 1) {
    throw Error(ErrorKind::InvalidArgument, "horizon must be at least 1");
  }
  if (!cfg.generator) {
    if (cfg.steps.size() != 1 && cfg.steps.size() != cfg.horizon) {
      throw Error(ErrorKind::DimensionMismatch,
                  "expected 1 or " + std::to_string(cfg.horizon) +
                      " steps, got " + std::to_string(cfg.steps.size()));
    }
    for (const MeasurementStep& s : cfg.steps) {
      if (s.dim() != cfg.true_initial.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "step dimension does not match the true state");
      }
    }
  }
  for (const FilterSpec& f : cfg.filters) {
    if (f.initial.dim() != cfg.true_initial.dim()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "filter '" + f.name + "' has the wrong dimension");
    }
    if (f.feed == OutcomeFeed::Shuffled && cfg.generator) {
      throw Error(ErrorKind::InvalidArgument,
                  "shuffled outcome feeds need a fixed step schedule");
    }
  }
  for (const FidelityPair& pr : cfg.fidelity_pairs) {
    if (pr.first >= cfg.filters.size() || pr.second >= cfg.filters.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "fidelity pair names a missing filter");
    }
  }
  if (cfg.generator && cfg.filters.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "a step generator needs at least one filter to observe");
  }
}

const MeasurementStep& scheduled_step(const TrajectoryConfig& cfg,
                                      std::size_t k0) {
  return cfg.steps.size() == 1 ? cfg.steps.front() : cfg.steps[k0];
}

// Filters advance together on per-filter outcome streams.
struct FilterBank {
  std::vector<DensityOperator> estimates;

  void advance(const TrajectoryConfig& cfg, const MeasurementStep& step,
               const std::vector<std::size_t>& outcome_per_filter,
               StepRecord& rec) {
    rec.regularized.assign(estimates.size(), 0);
    if (cfg.exact_increments) {
      for (const FidelityPair& pr : cfg.fidelity_pairs) {
        const OneStepCheck c = exact_one_step_submartingale(
            estimates[pr.first], estimates[pr.second], step);
        rec.exact_increments.push_back(c.rhs - c.lhs);
      }
    }
    for (std::size_t i = 0; i < estimates.size(); ++i) {
      CoarseUpdate u = coarse_update(estimates[i], step, outcome_per_filter[i]);
      rec.regularized[i] = u.regularized ? 1 : 0;
      estimates[i] = std::move(u.state);
    }
    for (const FidelityPair& pr : cfg.fidelity_pairs) {
      rec.fidelities.push_back(
          fidelity(estimates[pr.first], estimates[pr.second]));
    }
    if (cfg.store_states) rec.estimates = estimates;
  }
};

}  // namespace

std::vector<double> TrajectoryRecord::fidelity_series(std::size_t pair) const {
  std::vector<double> out;
  out.reserve(steps.size() + 1);
  out.push_back(initial_fidelities.at(pair));
  for (const StepRecord& s : steps) out.push_back(s.fidelities.at(pair));
  return out;
}

TruthStep step_truth(const DensityOperator& rho, const MeasurementStep& step,
                     Rng& rng) {
  const std::vector<double> probs = jump_probabilities(step.family(), rho);
  const std::size_t q = sample_discrete(probs, rng);
  DensityOperator next = apply_jump(step.family(), q, rho);
  const std::size_t p = sample_real_outcome(step.errors(), q, rng);
  return {q, p, std::move(next)};
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& cfg) {
  validate_config(cfg);
  TrajectoryRecord rec;
  rec.seed = cfg.seed;
  rec.pairs = cfg.fidelity_pairs;
  for (const FilterSpec& f : cfg.filters) {
    rec.filter_names.push_back(f.name);
    rec.feeds.push_back(f.feed);
    rec.initialized_at_truth.push_back(
        f.initial.matrix() == cfg.true_initial.matrix() ? 1 : 0);
  }
  for (const FidelityPair& pr : cfg.fidelity_pairs) {
    rec.initial_fidelities.push_back(
        fidelity(cfg.filters[pr.first].initial, cfg.filters[pr.second].initial));
  }
  rec.steps.resize(cfg.horizon);

  Rng rng(cfg.seed);
  FilterBank bank;
  for (const FilterSpec& f : cfg.filters) bank.estimates.push_back(f.initial);
  DensityOperator truth = cfg.true_initial;
  std::vector<std::size_t> feed(cfg.filters.size());

  if (cfg.generator) {
    for (std::size_t k0 = 0; k0 < cfg.horizon; ++k0) {
      StepRecord& s = rec.steps[k0];
      const MeasurementStep step = cfg.generator(k0 + 1, bank.estimates.front());
      if (step.dim() != truth.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "generated step has the wrong dimension");
      }
      s.k = k0 + 1;
      if (cfg.record_predictions) {
        s.predicted = outcome_probabilities(bank.estimates.front(), step);
      }
      TruthStep t = step_truth(truth, step, rng);
      s.ideal = t.ideal;
      s.real = t.real;
      truth = std::move(t.next);
      if (cfg.store_states) s.truth = truth;
      std::fill(feed.begin(), feed.end(), t.real);
      bank.advance(cfg, step, feed, s);
    }
    return rec;
  }

  // Fixed schedule: run the truth first so shuffled feeds can permute the
  // complete outcome stream. Filters draw no random numbers, so matched
  // filters see exactly what an interleaved loop would give them.
  for (std::size_t k0 = 0; k0 < cfg.horizon; ++k0) {
    StepRecord& s = rec.steps[k0];
    s.k = k0 + 1;
    TruthStep t = step_truth(truth, scheduled_step(cfg, k0), rng);
    s.ideal = t.ideal;
    s.real = t.real;
    truth = std::move(t.next);
    if (cfg.store_states) s.truth = truth;
  }
  std::vector<std::size_t> shuffled(cfg.horizon);
  for (std::size_t k0 = 0; k0 < cfg.horizon; ++k0) shuffled[k0] = rec.steps[k0].real;
  if (std::any_of(cfg.filters.begin(), cfg.filters.end(),
                  [](const FilterSpec& f) { return f.feed == OutcomeFeed::Shuffled; })) {
    Rng shuffle_rng(cfg.seed ^ kShuffleStream);
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[shuffle_rng.index(i)]);
    }
  }
  for (std::size_t k0 = 0; k0 < cfg.horizon; ++k0) {
    StepRecord& s = rec.steps[k0];
    const MeasurementStep& step = scheduled_step(cfg, k0);
    if (cfg.record_predictions && !bank.estimates.empty()) {
      s.predicted = outcome_probabilities(bank.estimates.front(), step);
    }
    for (std::size_t i = 0; i < cfg.filters.size(); ++i) {
      feed[i] = cfg.filters[i].feed == OutcomeFeed::Truth ? s.real : shuffled[k0];
    }
    bank.advance(cfg, step, feed, s);
  }
  return rec;
}

std::vector<TrajectoryRecord> run_ensemble(const TrajectoryConfig& config,
                                           std::size_t n_traj,
                                           std::uint64_t base_seed,
                                           unsigned workers) {
  if (n_traj < 1) {
    throw Error(ErrorKind::InvalidArgument, "n_traj must be at least 1");
  }
  validate_config(config);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_traj));

  std::vector<std::optional<TrajectoryRecord>> slots(n_traj);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    TrajectoryConfig local = config;
    for (std::size_t i = next++; i < n_traj; i = next++) {
      try {
        local.seed = base_seed + i;
        slots[i] = run_trajectory(local);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_traj;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrajectoryRecord> out;
  out.reserve(n_traj);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace qfilter
