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

// Temporal perturbation sets (integer shifts of input spike times within an
// L1 budget), their exact sizes, the rate-coding flip count, and the
// rate/temporal space-ratio analytics.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "snnv/bigint.hpp"
#include "snnv/errors.hpp"
#include "snnv/snn.hpp"

namespace snnv {

struct PerturbationBudget {
  int delta = 0;

  PerturbationBudget() = default;
  explicit PerturbationBudget(int d) : delta(d) {
    if (d < 0) throw DomainError("perturbation budget must be non-negative");
  }
};

// kAtMost yields every shift with total mass <= delta, including the original
// input. kExactly keeps only total mass == delta, the set produced by a
// recursive generator that emits once the remaining budget reaches zero.
enum class DeltaSemantics { kAtMost, kExactly };

// Counts whose exact decimal form would exceed this many digits are reported
// through ln_value only.
inline constexpr double kMaxExactDigits = 1e4;

struct SpaceCount {
  std::optional<BigInt> exact;
  double ln_value = -std::numeric_limits<double>::infinity();
  bool clamped = false;  // budget exceeded the number of flippable bits

  static SpaceCount of(BigInt v) {
    SpaceCount c;
    c.ln_value = log_of(v);
    c.exact = std::move(v);
    return c;
  }
};

// Deterministic stream over the perturbation set of `origin`, in increasing
// lexicographic order of the shift vector (perturbed - origin).
//
// Fixing the first coordinate's shift restricts the stream to one partition;
// the partitions listed by first_shift_partitions() are disjoint, ordered and
// cover the full set, so they can be consumed on separate workers.
class PerturbationStream {
 public:
  PerturbationStream(std::span<const int> origin, int time_steps, PerturbationBudget budget,
                     DeltaSemantics semantics = DeltaSemantics::kAtMost,
                     std::optional<int> first_shift = std::nullopt)
      : origin_(origin.begin(), origin.end()),
        time_steps_(time_steps),
        budget_(budget.delta),
        semantics_(semantics),
        first_shift_(first_shift),
        shift_(origin.size(), 0),
        prefix_(origin.size() + 1, 0),
        current_(origin.begin(), origin.end()) {
    for (int s : origin_)
      if (s < 0 || s > time_steps_ - 1) throw UsageError("origin spike time outside [0, T-1]");
    if (first_shift_) {
      if (origin_.empty()) throw UsageError("cannot fix the first shift of an empty input");
      const int d = *first_shift_;
      if (d < -std::min(origin_[0], budget_) || d > std::min(time_steps_ - 1 - origin_[0], budget_))
        throw UsageError("first shift outside its feasible range");
    }
  }

  // Advances to the next perturbation. Returns false once exhausted.
  bool next() {
    do {
      if (!started_) {
        started_ = true;
        if (first_shift_) set(0, *first_shift_);
        reset_suffix(first_shift_ ? 1 : 0);
      } else if (!advance()) {
        return false;
      }
    } while (semantics_ == DeltaSemantics::kExactly && prefix_.back() != budget_);
    return true;
  }

  std::span<const int> shift() const { return shift_; }
  std::span<const int> times() const { return current_; }
  SpikeTimes spike_times() const { return SpikeTimes{0, current_}; }
  int mass() const { return prefix_.back(); }

 private:
  void set(std::size_t i, int d) {
    shift_[i] = d;
    current_[i] = origin_[i] + d;
    prefix_[i + 1] = prefix_[i] + std::abs(d);
  }

  // Smallest feasible suffix starting at position i.
  void reset_suffix(std::size_t i) {
    for (; i < origin_.size(); ++i) set(i, -std::min(origin_[i], budget_ - prefix_[i]));
  }

  bool advance() {
    const std::size_t lowest = first_shift_ ? 1 : 0;
    for (std::size_t i = origin_.size(); i-- > lowest;) {
      const int cand = shift_[i] + 1;
      if (cand <= time_steps_ - 1 - origin_[i] && prefix_[i] + std::abs(cand) <= budget_) {
        set(i, cand);
        reset_suffix(i + 1);
        return true;
      }
    }
    return false;
  }

  std::vector<int> origin_;
  int time_steps_;
  int budget_;
  DeltaSemantics semantics_;
  std::optional<int> first_shift_;
  std::vector<int> shift_;
  std::vector<int> prefix_;  // prefix_[i] = sum of |shift| over positions < i
  std::vector<int> current_;
  bool started_ = false;
};

// Feasible shifts of the first input neuron, ascending.
inline std::vector<int> first_shift_partitions(std::span<const int> origin, int time_steps,
                                               PerturbationBudget budget) {
  std::vector<int> out;
  if (origin.empty()) return out;
  for (int d = -std::min(origin[0], budget.delta);
       d <= std::min(time_steps - 1 - origin[0], budget.delta); ++d)
    out.push_back(d);
  return out;
}

// Collects the whole stream. Meant for small sets and tests.
inline std::vector<SpikeTimes> enumerate_perturbations(
    const SpikeTimes& input, int time_steps, PerturbationBudget budget,
    DeltaSemantics semantics = DeltaSemantics::kAtMost) {
  if (input.layer != 0) throw UsageError("perturbations are defined on layer 0");
  std::vector<SpikeTimes> out;
  PerturbationStream stream(input.times, time_steps, budget, semantics);
  while (stream.next()) out.push_back(stream.spike_times());
  return out;
}

namespace detail {

inline double log_add(double a, double b) {
  if (std::isinf(a) && a < 0) return b;
  if (std::isinf(b) && b < 0) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace detail

// |{s' in [0,T-1]^N : sum |s'_n - s_n| <= delta}| (or == delta under
// kExactly), by dynamic programming over (neuron, remaining budget) with the
// per-neuron shift range clamped exactly as the stream clamps it.
//
// Above `max_digits` decimal digits (judged from an upper bound) the DP runs
// in the log domain and only ln_value is filled in.
inline SpaceCount count_temporal(std::span<const int> origin, int time_steps,
                                 PerturbationBudget budget,
                                 DeltaSemantics semantics = DeltaSemantics::kAtMost,
                                 double max_digits = kMaxExactDigits) {
  const int D = budget.delta;
  for (int s : origin)
    if (s < 0 || s > time_steps - 1) throw UsageError("origin spike time outside [0, T-1]");
  const double N = static_cast<double>(origin.size());
  const double ln_estimate =
      std::min(N * std::log(std::min(2.0 * D + 1.0, double(time_steps))),
               log_binomial(N + D - 1, D) + N * std::log1p(2.0 * D / std::max(N, 1.0)));
  const bool exact = origin.empty() || ln_estimate / std::log(10.0) <= max_digits;

  if (exact) {
    std::vector<BigInt> ways(D + 1), next(D + 1);
    for (int r = 0; r <= D; ++r)
      ways[r] = (semantics == DeltaSemantics::kAtMost || r == 0) ? 1 : 0;
    for (std::size_t i = origin.size(); i-- > 0;) {
      const int s = origin[i];
      for (int r = 0; r <= D; ++r) {
        BigInt acc = 0;
        for (int d = -std::min(s, r); d <= std::min(time_steps - 1 - s, r); ++d)
          acc += ways[r - std::abs(d)];
        next[r] = std::move(acc);
      }
      ways.swap(next);
    }
    return SpaceCount::of(ways[D]);
  }

  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> ways(D + 1), next(D + 1);
  for (int r = 0; r <= D; ++r)
    ways[r] = (semantics == DeltaSemantics::kAtMost || r == 0) ? 0.0 : ninf;
  for (std::size_t i = origin.size(); i-- > 0;) {
    const int s = origin[i];
    for (int r = 0; r <= D; ++r) {
      double acc = ninf;
      for (int d = -std::min(s, r); d <= std::min(time_steps - 1 - s, r); ++d)
        acc = detail::log_add(acc, ways[r - std::abs(d)]);
      next[r] = acc;
    }
    ways.swap(next);
  }
  SpaceCount c;
  c.ln_value = ways[D];
  return c;
}

inline SpaceCount count_temporal(const SpikeTimes& input, int time_steps,
                                 PerturbationBudget budget,
                                 DeltaSemantics semantics = DeltaSemantics::kAtMost) {
  if (input.layer != 0) throw UsageError("perturbations are defined on layer 0");
  return count_temporal(std::span<const int>(input.times), time_steps, budget, semantics);
}

// Number of ways to flip between 1 and delta of the N*T bits of a rate-coded
// spike train: sum_{d=1}^{delta} C(NT, d). The unperturbed train is not
// counted. A budget above NT is clamped and flagged.
inline SpaceCount count_rate(long long neurons, long long time_steps, PerturbationBudget budget) {
  if (neurons < 1 || time_steps < 1) throw DomainError("N and T must be positive");
  const long long bits = neurons * time_steps;
  const long long top = std::min<long long>(budget.delta, bits);
  SpaceCount c;
  c.clamped = budget.delta > bits;
  if (top == 0) {
    c.exact = BigInt(0);
    return c;
  }
  const double peak = log_binomial(double(bits), double(std::min(top, bits / 2)));
  if ((peak + std::log(double(top))) / std::log(10.0) <= kMaxExactDigits) {
    BigInt term = 1, sum = 0;
    for (long long d = 1; d <= top; ++d) {
      term *= bits - d + 1;
      term /= d;
      sum += term;
    }
    const bool clamped = c.clamped;
    c = SpaceCount::of(std::move(sum));
    c.clamped = clamped;
    return c;
  }
  double acc = -std::numeric_limits<double>::infinity();
  for (long long d = 1; d <= top; ++d)
    acc = detail::log_add(acc, log_binomial(double(bits), double(d)));
  c.ln_value = acc;
  return c;
}

// Counting argument for the unclamped temporal set: the budget is split into
// a weak composition (delta_0, ..., delta_{N-1}) of delta, C(N+delta-1, delta)
// ways, and each composition admits at most prod(1 + 2 delta_n) <=
// (1 + 2 delta/N)^N shift vectors.
struct TemporalBound {
  SpaceCount partitions;  // C(N + delta - 1, delta)
  double ln_bound = 0.0;  // ln C(N+delta-1, delta) + N ln(1 + 2 delta / N)
};

inline TemporalBound temporal_upper_bound(long long neurons, PerturbationBudget budget) {
  if (neurons < 1) throw DomainError("N must be positive");
  const long long D = budget.delta;
  TemporalBound b;
  const double ln_parts = log_binomial(double(neurons + D - 1), double(D));
  if (ln_parts / std::log(10.0) <= kMaxExactDigits) {
    b.partitions = SpaceCount::of(binomial(neurons + D - 1, D));
  } else {
    b.partitions.ln_value = ln_parts;
  }
  b.ln_bound = b.partitions.ln_value +
               static_cast<double>(neurons) * std::log1p(2.0 * double(D) / double(neurons));
  return b;
}

// ln f with f = T^delta / (1 + 2 delta / N)^N, the rate-to-temporal space
// ratio. Real-valued arguments allow differentiation in delta = alpha*T*N.
inline double log_space_ratio(double time_steps, double neurons, double delta) {
  if (time_steps < 1 || neurons < 1) throw DomainError("T and N must be at least 1");
  if (delta < 0) throw DomainError("delta must be non-negative");
  return delta * std::log(time_steps) - neurons * std::log1p(2.0 * delta / neurons);
}

inline double space_ratio(int time_steps, int neurons, PerturbationBudget budget) {
  return log_space_ratio(time_steps, neurons, budget.delta);
}

// Closed-form d(ln f)/d(alpha) for delta = alpha*T*N.
inline double log_space_ratio_alpha_slope(double time_steps, double neurons, double alpha) {
  return neurons * time_steps * (std::log(time_steps) - 2.0 / (1.0 + 2.0 * alpha * time_steps));
}

}  // namespace snnv
