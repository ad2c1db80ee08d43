// Copyright 2026 The snnv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Direct counterexample search: simulate every input of the perturbation set
// and stop at the first one on which the target label does not win strictly.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "snnv/errors.hpp"
#include "snnv/perturbation.hpp"
#include "snnv/snn.hpp"
#include "snnv/verdict.hpp"

namespace snnv {

struct DcsOptions {
  int workers = 1;
  // Return the lexicographically first counterexample and a reproducible
  // perturbation count, also when workers > 1.
  bool deterministic = true;
  std::optional<std::chrono::duration<double>> deadline;
  DeltaSemantics semantics = DeltaSemantics::kAtMost;
};

namespace detail {

struct PartitionResult {
  long long checked = 0;
  bool complete = false;
  std::optional<Counterexample> counterexample;
};

}  // namespace detail

inline Verdict dcs_verify(const SnnModel& model, const SpikeTimes& input, int label,
                          PerturbationBudget budget, const DcsOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  validate(model);
  validate_input(model.config, input);
  if (label < 0 || label >= model.config.output_size())
    throw UsageError("label " + std::to_string(label) + " outside [0, " +
                     std::to_string(model.config.output_size() - 1) + "]");
  if (options.workers < 1) throw UsageError("workers must be at least 1");

  const int T = model.config.time_steps;
  const std::vector<int> partitions = first_shift_partitions(input.times, T, budget);
  const std::size_t P = partitions.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::vector<detail::PartitionResult> results(P);
  std::atomic<std::size_t> next_partition{0};
  std::atomic<std::size_t> best{kNone};  // lowest partition holding a counterexample
  std::atomic<bool> timed_out{false};
  const std::optional<Clock::time_point> deadline =
      options.deadline ? std::optional(start + std::chrono::duration_cast<Clock::duration>(
                                                   *options.deadline))
                       : std::nullopt;

  auto should_abandon = [&](std::size_t idx) {
    const std::size_t b = best.load(std::memory_order_relaxed);
    return options.deterministic ? b < idx : b != kNone;
  };

  auto worker = [&] {
    Simulator sim(model);
    for (;;) {
      const std::size_t idx = next_partition.fetch_add(1);
      if (idx >= P || timed_out.load()) return;
      if (should_abandon(idx)) continue;
      detail::PartitionResult& res = results[idx];
      PerturbationStream stream(input.times, T, budget, options.semantics, partitions[idx]);
      for (;;) {
        if (!stream.next()) {
          res.complete = true;
          break;
        }
        if (deadline && Clock::now() >= *deadline) {
          timed_out.store(true);
          return;
        }
        const std::span<const int> out = sim.run(stream.times());
        ++res.checked;
        if (!strict_win_for(out, label)) {
          std::vector<int> outputs(out.begin(), out.end());
          const Prediction pred = predict(outputs);
          res.counterexample = Counterexample{stream.spike_times(), pred, std::move(outputs)};
          std::size_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          break;
        }
        if (should_abandon(idx)) break;
      }
    }
  };

  const int threads = std::min<int>(options.workers, static_cast<int>(std::max<std::size_t>(P, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  Verdict v;
  const std::size_t found = best.load();
  if (found != kNone) {
    v.kind = VerdictKind::kNotRobust;
    if (options.deterministic) {
      v.counterexample = results[found].counterexample;
      for (std::size_t k = 0; k <= found; ++k) v.stats.perturbations_checked += results[k].checked;
    } else {
      for (const auto& r : results) {
        if (!v.counterexample && r.counterexample) v.counterexample = r.counterexample;
        v.stats.perturbations_checked += r.checked;
      }
    }
  } else {
    for (const auto& r : results) v.stats.perturbations_checked += r.checked;
    if (timed_out.load()) {
      v.kind = VerdictKind::kUnknown;
      v.reason = "timeout";
    } else {
      v.kind = VerdictKind::kRobust;
    }
  }
  v.stats.wall_time = Clock::now() - start;
  return v;
}

}  // namespace snnv
