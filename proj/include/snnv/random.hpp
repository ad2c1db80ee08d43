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

// Seeded generation of models and inputs. The generator is mt19937_64 (its
// output sequence is fixed by the C++ standard) and integer ranges are drawn
// by rejection sampling, so results do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "snnv/errors.hpp"
#include "snnv/snn.hpp"

namespace snnv {

// SplitMix64 finalizer; used to derive independent seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = mix_seed(base);
  for (std::uint64_t p : parts) s = mix_seed(s ^ mix_seed(p));
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [lo, hi].
  long long uniform_int(long long lo, long long hi) {
    if (hi < lo) throw UsageError("empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long long>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return lo + static_cast<long long>(r % span);
  }

 private:
  std::mt19937_64 engine_;
};

struct ModelSpec {
  std::vector<int> layer_sizes;
  int time_steps = 0;
  int tau = 1;
  double theta = 1.0;
  int weight_bits = 10;  // weights are k * 2^-bits with |k| <= 2^bits
};

// Weights are drawn layer by layer, row-major.
inline SnnModel generate_model(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.weight_bits < 0 || spec.weight_bits > 30) throw DomainError("weight_bits must be in [0, 30]");
  SnnModel m;
  m.config.time_steps = spec.time_steps;
  m.config.tau = spec.tau;
  m.config.theta = spec.theta;
  m.config.gamma = 1.0;
  m.config.layer_sizes = spec.layer_sizes;
  validate(m.config);
  Rng rng(seed);
  const long long scale = 1ll << spec.weight_bits;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    WeightMatrix w(spec.layer_sizes[l], spec.layer_sizes[l + 1]);
    for (double& v : w.values)
      v = static_cast<double>(rng.uniform_int(-scale, scale)) / static_cast<double>(scale);
    m.weights.push_back(std::move(w));
  }
  return m;
}

inline SpikeTimes random_input(int neurons, int time_steps, Rng& rng) {
  SpikeTimes s{0, {}};
  for (int n = 0; n < neurons; ++n) s.times.push_back(static_cast<int>(rng.uniform_int(0, time_steps - 1)));
  return s;
}

}  // namespace snnv
