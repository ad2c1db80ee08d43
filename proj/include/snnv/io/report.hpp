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

// Verification report log: one JSON object per line, append-only.

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "snnv/errors.hpp"
#include "snnv/verdict.hpp"

namespace snnv::io {

struct ReportRecord {
  std::string instance_id;
  std::string method;  // "dcs" or "smt"
  int delta = 0;
  VerdictKind verdict = VerdictKind::kUnknown;
  std::optional<std::vector<int>> counterexample;  // perturbed input times
  std::optional<std::vector<int>> output_times;    // outputs of the adversarial run
  std::optional<long long> perturbations_checked;  // dcs only
  double wall_time_s = 0.0;
  std::string model_hash;
  std::string input_hash;
  std::string reason;
  // Cell coordinates, so summaries can be rebuilt from the log alone.
  int time_steps = 0;
  std::vector<int> layer_sizes;

  bool operator==(const ReportRecord&) const = default;
};

inline nlohmann::ordered_json to_json(const ReportRecord& r) {
  nlohmann::ordered_json j;
  j["instance"] = r.instance_id;
  j["method"] = r.method;
  j["delta"] = r.delta;
  j["verdict"] = to_string(r.verdict);
  j["counterexample"] = r.counterexample ? nlohmann::ordered_json(*r.counterexample) : nullptr;
  j["output_times"] = r.output_times ? nlohmann::ordered_json(*r.output_times) : nullptr;
  j["perturbations_checked"] =
      r.perturbations_checked ? nlohmann::ordered_json(*r.perturbations_checked) : nullptr;
  j["wall_time_s"] = r.wall_time_s;
  j["model_hash"] = r.model_hash;
  j["input_hash"] = r.input_hash;
  if (!r.reason.empty()) j["reason"] = r.reason;
  j["T"] = r.time_steps;
  j["layer_sizes"] = r.layer_sizes;
  return j;
}

inline ReportRecord record_from_json(const nlohmann::json& j) {
  try {
    ReportRecord r;
    r.instance_id = j.at("instance").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.delta = j.at("delta").get<int>();
    r.verdict = verdict_kind_from_string(j.at("verdict").get<std::string>());
    if (!j.at("counterexample").is_null())
      r.counterexample = j["counterexample"].get<std::vector<int>>();
    if (j.contains("output_times") && !j["output_times"].is_null())
      r.output_times = j["output_times"].get<std::vector<int>>();
    if (!j.at("perturbations_checked").is_null())
      r.perturbations_checked = j["perturbations_checked"].get<long long>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.model_hash = j.at("model_hash").get<std::string>();
    r.input_hash = j.at("input_hash").get<std::string>();
    if (j.contains("reason")) r.reason = j["reason"].get<std::string>();
    r.time_steps = j.value("T", 0);
    if (j.contains("layer_sizes")) r.layer_sizes = j["layer_sizes"].get<std::vector<int>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("report record: ") + e.what());
  } catch (const UsageError& e) {
    throw SchemaError(std::string("report record: ") + e.what());
  }
}

// Appends one line. Calls from different threads of this process are
// serialized; separate processes should write separate files.
inline void append_report(const ReportRecord& record, const std::string& path) {
  static std::mutex mu;
  const std::string line = to_json(record).dump() + "\n";
  std::lock_guard lock(mu);
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw Error("cannot open report " + path);
  f << line;
  f.flush();
  if (!f) throw Error("write failed: " + path);
}

inline std::vector<ReportRecord> parse_report(const std::string& text) {
  std::vector<ReportRecord> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("report line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

inline std::vector<ReportRecord> read_report(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open report " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return parse_report(os.str());
}

// Mean and sample standard deviation, the usual "mean +- sd" table entry.
struct TimeStats {
  long long count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

inline TimeStats time_stats(const std::vector<double>& xs) {
  TimeStats s;
  s.count = static_cast<long long>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct SummaryRow {
  std::string method;
  int delta = 0;
  VerdictKind verdict = VerdictKind::kUnknown;
  TimeStats time;
};

// Per (method, delta, verdict) time statistics.
inline std::vector<SummaryRow> summarize(const std::vector<ReportRecord>& records) {
  std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
  for (const auto& r : records)
    groups[{r.method, r.delta, static_cast<int>(r.verdict)}].push_back(r.wall_time_s);
  std::vector<SummaryRow> out;
  for (const auto& [key, times] : groups)
    out.push_back({std::get<0>(key), std::get<1>(key), static_cast<VerdictKind>(std::get<2>(key)),
                   time_stats(times)});
  return out;
}

}  // namespace snnv::io
