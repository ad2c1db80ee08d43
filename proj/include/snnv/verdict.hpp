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

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "snnv/snn.hpp"

namespace snnv {

enum class VerdictKind { kRobust, kNotRobust, kUnknown };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::kRobust: return "robust";
    case VerdictKind::kNotRobust: return "not_robust";
    case VerdictKind::kUnknown: return "unknown";
  }
  return "unknown";
}

inline VerdictKind verdict_kind_from_string(const std::string& s) {
  if (s == "robust") return VerdictKind::kRobust;
  if (s == "not_robust") return VerdictKind::kNotRobust;
  if (s == "unknown") return VerdictKind::kUnknown;
  throw UsageError("unknown verdict kind '" + s + "'");
}

// A perturbed input under which the target label does not win strictly,
// together with the run that shows it.
struct Counterexample {
  SpikeTimes input;
  Prediction prediction;
  std::vector<int> output_times;

  bool operator==(const Counterexample&) const = default;
};

struct VerificationStats {
  long long perturbations_checked = 0;
  std::chrono::duration<double> wall_time{0};
};

struct Verdict {
  VerdictKind kind = VerdictKind::kUnknown;
  std::optional<Counterexample> counterexample;  // present iff kNotRobust
  std::string reason;                            // set for kUnknown
  VerificationStats stats;
};

}  // namespace snnv
