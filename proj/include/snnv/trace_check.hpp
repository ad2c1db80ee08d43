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

// Literal re-check of a NetworkTrace against the network constraints. Each
// conjunct is instantiated independently of the simulator's loop structure so
// that a hand-edited or solver-produced trace can be audited.

#include <sstream>
#include <string>
#include <vector>

#include "snnv/errors.hpp"
#include "snnv/snn.hpp"

namespace snnv {

// Constraint families of the encoding, in assertion order.
enum class Constraint {
  kSpikeRange = 1,      // tau*l <= s <= T-1
  kPotentialInit,       // p at t = 0 is zero
  kPotentialSum,        // p = sum of weights of arrived spikes
  kFiredFlag,           // a = some earlier potential reached theta
  kSpikeOnCrossing,     // first crossing at t - tau  <=>  spike at t
  kForcedSpike,         // never crossed in time  <=>  spike at T-1
  kInputBudget,         // L1 distance to the original input <= delta
  kRobustness,          // every other output spikes strictly later
};

// Short identifier ("xi1" .. "xi8") used in reports and SMT comments.
inline std::string constraint_id(Constraint c) {
  return "xi" + std::to_string(static_cast<int>(c));
}

struct Violation {
  Constraint constraint;
  int layer = 0;
  int neuron = 0;
  int time = -1;  // -1 when the conjunct has no time index
  std::string detail;

  std::string describe() const {
    std::ostringstream os;
    os << constraint_id(constraint) << " layer " << layer << " neuron " << neuron;
    if (time >= 0) os << " t " << time;
    if (!detail.empty()) os << ": " << detail;
    return os.str();
  }
};

inline std::vector<Violation> validate_trace(const SnnModel& model, const NetworkTrace& trace) {
  const ModelConfig& cfg = model.config;
  const int T = cfg.time_steps;
  const int L = cfg.num_layers();
  if (trace.layer_sizes != cfg.layer_sizes || trace.time_steps != T ||
      static_cast<int>(trace.spike_times.size()) != L + 1 ||
      static_cast<int>(trace.potentials.size()) != L + 1 ||
      static_cast<int>(trace.fired.size()) != L + 1)
    throw UsageError("trace shape does not match the model");
  for (int l = 0; l <= L; ++l) {
    if (static_cast<int>(trace.spike_times[l].times.size()) != cfg.layer_sizes[l])
      throw UsageError("spike time vector of layer " + std::to_string(l) + " has wrong size");
    if (l > 0 && (trace.potentials[l].size() != static_cast<std::size_t>(T) * cfg.layer_sizes[l] ||
                  trace.fired[l].size() != static_cast<std::size_t>(T) * cfg.layer_sizes[l]))
      throw UsageError("potential or flag array of layer " + std::to_string(l) +
                       " has wrong size");
  }

  std::vector<Violation> out;
  auto report = [&](Constraint c, int l, int n, int t, std::string detail = {}) {
    out.push_back(Violation{c, l, n, t, std::move(detail)});
  };
  const double theta = cfg.theta;
  const int tau = cfg.tau;

  for (int n = 0; n < cfg.layer_sizes[0]; ++n) {
    const int s = trace.spike_times[0].times[n];
    if (s < 0 || s > T - 1) report(Constraint::kSpikeRange, 0, n, -1, "input outside [0, T-1]");
  }

  for (int l = 1; l <= L; ++l) {
    const auto& prev = trace.spike_times[l - 1].times;
    const WeightMatrix& w = model.weights[l - 1];
    for (int n = 0; n < cfg.layer_sizes[l]; ++n) {
      const int s = trace.spike_times[l].times[n];
      if (s < tau * l || s > T - 1)
        report(Constraint::kSpikeRange, l, n, -1, "s = " + std::to_string(s));

      if (trace.potential(l, 0, n) != 0.0) report(Constraint::kPotentialInit, l, n, 0);

      for (int t = 1; t < T; ++t) {
        double sum = 0.0;
        for (int m = 0; m < w.rows; ++m)
          if (prev[m] <= t) sum += w(m, n);
        if (trace.potential(l, t, n) != sum) report(Constraint::kPotentialSum, l, n, t);
      }

      if (trace.fired_before(l, 0, n)) report(Constraint::kFiredFlag, l, n, 0);
      for (int t = 1; t < T; ++t) {
        bool any = false;
        for (int u = 0; u < t; ++u) any = any || trace.potential(l, u, n) >= theta;
        if (trace.fired_before(l, t, n) != any) report(Constraint::kFiredFlag, l, n, t);
      }

      for (int t = tau * l; t <= T - 2; ++t) {
        const bool crossing =
            !trace.fired_before(l, t - tau, n) && trace.potential(l, t - tau, n) >= theta;
        if (crossing != (s == t)) report(Constraint::kSpikeOnCrossing, l, n, t);
      }

      if (!trace.fired_before(l, T - 1 - tau, n) != (s == T - 1))
        report(Constraint::kForcedSpike, l, n, T - 1);
    }
  }
  return out;
}

}  // namespace snnv
