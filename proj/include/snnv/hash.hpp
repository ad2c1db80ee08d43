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

// Content fingerprints used to tie reports and SMT scripts to the exact model
// and input they were produced from. 64-bit FNV-1a over a canonical byte
// layout (little-endian integers, IEEE-754 bit patterns for reals).

#include <bit>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

#include "snnv/snn.hpp"

namespace snnv {

class Fingerprint {
 public:
  void add_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= (v >> (8 * i)) & 0xffu;
      state_ *= 0x100000001b3ull;
    }
  }
  void add_int(long long v) { add_u64(static_cast<std::uint64_t>(v)); }
  void add_double(double v) { add_u64(std::bit_cast<std::uint64_t>(v)); }

  std::uint64_t value() const { return state_; }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

inline std::string model_hash(const SnnModel& model) {
  Fingerprint f;
  const ModelConfig& c = model.config;
  f.add_int(c.time_steps);
  f.add_int(c.tau);
  f.add_double(c.theta);
  f.add_double(c.gamma);
  f.add_int(static_cast<long long>(c.layer_sizes.size()));
  for (int n : c.layer_sizes) f.add_int(n);
  for (const WeightMatrix& w : model.weights)
    for (double v : w.values) f.add_double(v);
  return f.hex();
}

inline std::string input_hash(std::span<const int> times) {
  Fingerprint f;
  f.add_int(static_cast<long long>(times.size()));
  for (int t : times) f.add_int(t);
  return f.hex();
}

}  // namespace snnv
