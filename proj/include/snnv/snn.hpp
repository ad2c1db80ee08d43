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

// Discrete-time integrate-and-fire network with single-spike temporal coding.
//
// Every neuron of layer l >= 1 integrates the weighted, already-arrived spikes
// of layer l-1. The potential starts at zero, is cumulative (no reset, no
// leak) and only the first threshold crossing matters: a crossing at step t
// produces a spike at t + tau, and a neuron that has not crossed in time is
// forced to spike at the last step T-1. The simulator reproduces the SMT
// encoding in snnv/smt/constraints.hpp conjunct by conjunct.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snnv/errors.hpp"

namespace snnv {

struct ModelConfig {
  int time_steps = 0;  // T
  int tau = 1;         // synaptic delay in steps
  double theta = 1.0;  // firing threshold
  double gamma = 1.0;  // leak factor, only 1.0 (IF) is supported
  std::vector<int> layer_sizes;  // [N_0, ..., N_L], index 0 is the input

  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }

  bool operator==(const ModelConfig&) const = default;
};

// Throws DomainError unless the configuration is usable.
inline void validate(const ModelConfig& cfg) {
  if (cfg.layer_sizes.size() < 2)
    throw DomainError("layer_sizes needs an input and at least one more layer");
  for (int n : cfg.layer_sizes)
    if (n <= 0) throw DomainError("layer sizes must be positive");
  if (cfg.tau < 1) throw DomainError("tau must be positive");
  if (!(std::isfinite(cfg.theta) && cfg.theta > 0.0))
    throw DomainError("theta must be a positive finite number");
  if (cfg.gamma != 1.0)
    throw DomainError("only gamma = 1 (integrate-and-fire) is supported");
  if (cfg.time_steps < cfg.tau * cfg.num_layers() + 1)
    throw DomainError("T must be at least tau * L + 1");
}

// Dense row-major matrix of synaptic weights between two adjacent layers.
struct WeightMatrix {
  int rows = 0;  // presynaptic neurons
  int cols = 0;  // postsynaptic neurons
  std::vector<double> values;

  WeightMatrix() = default;
  WeightMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), values(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int m, int n) { return values[static_cast<std::size_t>(m) * cols + n]; }
  double operator()(int m, int n) const {
    return values[static_cast<std::size_t>(m) * cols + n];
  }

  bool operator==(const WeightMatrix&) const = default;
};

struct SnnModel {
  ModelConfig config;
  std::vector<WeightMatrix> weights;  // weights[l-1] feeds layer l

  bool operator==(const SnnModel&) const = default;
};

inline void validate(const SnnModel& model) {
  validate(model.config);
  const auto& sizes = model.config.layer_sizes;
  if (model.weights.size() != sizes.size() - 1)
    throw DomainError("expected one weight matrix per non-input layer");
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    const WeightMatrix& w = model.weights[l];
    if (w.rows != sizes[l] || w.cols != sizes[l + 1] ||
        w.values.size() != static_cast<std::size_t>(w.rows) * w.cols)
      throw DomainError("weight matrix " + std::to_string(l) +
                        " does not match layer_sizes");
    for (double v : w.values)
      if (!std::isfinite(v)) throw DomainError("weights must be finite");
  }
}

// First-spike times of one layer.
struct SpikeTimes {
  int layer = 0;
  std::vector<int> times;

  bool operator==(const SpikeTimes&) const = default;
};

// Throws UsageError if `input` is not a valid layer-0 spike vector for cfg.
inline void validate_input(const ModelConfig& cfg, const SpikeTimes& input) {
  if (input.layer != 0) throw UsageError("input spike times must belong to layer 0");
  if (static_cast<int>(input.times.size()) != cfg.input_size())
    throw UsageError("input has " + std::to_string(input.times.size()) +
                     " spike times, model expects " + std::to_string(cfg.input_size()));
  for (int t : input.times)
    if (t < 0 || t > cfg.time_steps - 1)
      throw UsageError("input spike time " + std::to_string(t) + " outside [0, T-1]");
}

// Maps intensities in [0, x_max] to spike times, larger values spiking
// earlier: round-half-up of (1 - v / x_max) * (T - 1).
inline SpikeTimes encode_intensities(std::span<const double> values, double x_max,
                                     int time_steps) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be positive");
  if (time_steps < 2) throw DomainError("T must be at least 2");
  SpikeTimes out{0, {}};
  out.times.reserve(values.size());
  for (double v : values) {
    if (!(v >= 0.0 && v <= x_max))
      throw DomainError("intensity " + std::to_string(v) + " outside [0, x_max]");
    const double scaled = (1.0 - v / x_max) * (time_steps - 1);
    int t = static_cast<int>(std::floor(scaled + 0.5));
    out.times.push_back(std::clamp(t, 0, time_steps - 1));
  }
  return out;
}

// Full record of one simulation. Potentials and flags are stored per layer
// l >= 1 as T x N_l row-major arrays; index 0 is left empty.
struct NetworkTrace {
  std::vector<int> layer_sizes;
  int time_steps = 0;
  std::vector<SpikeTimes> spike_times;               // layers 0..L
  std::vector<std::vector<double>> potentials;       // p[l][t][n]
  std::vector<std::vector<std::uint8_t>> fired;      // a[l][t][n]

  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

  std::size_t index(int l, int t, int n) const {
    return static_cast<std::size_t>(t) * layer_sizes[l] + n;
  }
  double potential(int l, int t, int n) const { return potentials[l][index(l, t, n)]; }
  double& potential(int l, int t, int n) { return potentials[l][index(l, t, n)]; }
  bool fired_before(int l, int t, int n) const { return fired[l][index(l, t, n)] != 0; }
  void set_fired_before(int l, int t, int n, bool v) { fired[l][index(l, t, n)] = v; }

  std::span<const int> output_times() const { return spike_times.back().times; }
};

namespace detail {

// Computes potentials, fired flags and spike times of one layer from the
// spike times of the previous layer.
inline void integrate_layer(const ModelConfig& cfg, int layer, const WeightMatrix& w,
                            std::span<const int> prev_times, std::span<double> pot,
                            std::span<std::uint8_t> fired, std::span<int> times) {
  const int T = cfg.time_steps;
  const int width = w.cols;
  std::fill(pot.begin(), pot.end(), 0.0);
  // p[t][n] = sum over m (ascending) of w[m][n] * 1(s[m] <= t), for t >= 1.
  for (int t = 1; t < T; ++t) {
    double* row = pot.data() + static_cast<std::size_t>(t) * width;
    for (int m = 0; m < w.rows; ++m) {
      if (prev_times[m] > t) continue;
      const double* wrow = w.values.data() + static_cast<std::size_t>(m) * width;
      for (int n = 0; n < width; ++n) row[n] += wrow[n];
    }
  }
  for (int n = 0; n < width; ++n) {
    fired[n] = 0;
    for (int t = 1; t < T; ++t) {
      const std::size_t prev = static_cast<std::size_t>(t - 1) * width + n;
      fired[static_cast<std::size_t>(t) * width + n] =
          fired[prev] || pot[prev] >= cfg.theta;
    }
    int spike = T - 1;
    for (int t = cfg.tau * layer; t <= T - 2; ++t) {
      const std::size_t at = static_cast<std::size_t>(t - cfg.tau) * width + n;
      if (!fired[at] && pot[at] >= cfg.theta) {
        spike = t;
        break;
      }
    }
    times[n] = spike;
  }
}

}  // namespace detail

// Reusable simulation buffers for repeated runs of one model. Not thread-safe;
// give every worker its own instance.
class Simulator {
 public:
  explicit Simulator(const SnnModel& model) : model_(&model) {
    validate(model);
    const auto& sizes = model.config.layer_sizes;
    const std::size_t T = model.config.time_steps;
    times_.resize(sizes.size());
    pot_.resize(sizes.size());
    fired_.resize(sizes.size());
    times_[0].resize(sizes[0]);
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      times_[l].resize(sizes[l]);
      pot_[l].resize(T * sizes[l]);
      fired_[l].resize(T * sizes[l]);
    }
  }

  // Runs the network and returns the output-layer spike times. The span is
  // valid until the next call.
  std::span<const int> run(std::span<const int> input) {
    const ModelConfig& cfg = model_->config;
    std::copy(input.begin(), input.end(), times_[0].begin());
    for (int l = 1; l <= cfg.num_layers(); ++l)
      detail::integrate_layer(cfg, l, model_->weights[l - 1], times_[l - 1], pot_[l],
                              fired_[l], times_[l]);
    return times_.back();
  }

  NetworkTrace trace() const {
    NetworkTrace tr;
    tr.layer_sizes = model_->config.layer_sizes;
    tr.time_steps = model_->config.time_steps;
    for (std::size_t l = 0; l < times_.size(); ++l)
      tr.spike_times.push_back(SpikeTimes{static_cast<int>(l), times_[l]});
    tr.potentials = pot_;
    tr.fired = fired_;
    return tr;
  }

  const SnnModel& model() const { return *model_; }

 private:
  const SnnModel* model_;
  std::vector<std::vector<int>> times_;
  std::vector<std::vector<double>> pot_;
  std::vector<std::vector<std::uint8_t>> fired_;
};

inline NetworkTrace simulate(const SnnModel& model, const SpikeTimes& input) {
  validate(model);
  validate_input(model.config, input);
  Simulator sim(model);
  sim.run(input.times);
  return sim.trace();
}

struct Prediction {
  int label = 0;
  int winner_time = 0;
  bool strict = false;  // no other output neuron ties the winner

  bool operator==(const Prediction&) const = default;
};

// Time-to-first-spike readout. Ties go to the lowest index and clear `strict`.
inline Prediction predict(std::span<const int> output_times) {
  if (output_times.empty()) throw UsageError("no output spike times");
  const auto it = std::min_element(output_times.begin(), output_times.end());
  Prediction p;
  p.label = static_cast<int>(it - output_times.begin());
  p.winner_time = *it;
  p.strict = std::count(output_times.begin(), output_times.end(), *it) == 1;
  return p;
}

inline Prediction predict(const NetworkTrace& trace) { return predict(trace.output_times()); }

inline Prediction infer(const SnnModel& model, const SpikeTimes& input) {
  return predict(simulate(model, input));
}

// True iff `label` wins strictly, i.e. the local robustness condition holds
// for this single input.
inline bool strict_win_for(std::span<const int> output_times, int label) {
  const int mine = output_times[label];
  for (int n = 0; n < static_cast<int>(output_times.size()); ++n)
    if (n != label && output_times[n] <= mine) return false;
  return true;
}

}  // namespace snnv
