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

// Benchmark harness: seeded model/instance generation over a grid of
// (T, hidden size, delta, method), raw per-run report records, and summaries
// (mean +- sd per cell and verdict, least-squares time-vs-T fits) that are
// recomputed from those records alone.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "snnv/dcs.hpp"
#include "snnv/errors.hpp"
#include "snnv/hash.hpp"
#include "snnv/io/report.hpp"
#include "snnv/random.hpp"
#include "snnv/smt/solver.hpp"
#include "snnv/snn.hpp"

namespace snnv::bench {

struct BenchPlan {
  std::vector<int> time_steps{16};
  std::vector<int> hidden_sizes{32};
  std::vector<int> deltas{1};
  std::vector<std::string> methods{"dcs"};
  int input_size = 8;
  int output_size = 2;
  int samples = 14;  // fixed inputs per model
  int repetitions = 1;
  std::uint64_t seed = 1;
  std::optional<double> deadline_s;
  int tau = 1;
  double theta = 1.0;
  int weight_bits = 10;
  int dcs_workers = 1;      // parallelism inside one timed DCS run
  bool parallel_cells = false;
  std::string solver_command{smt::kDefaultSolverCommand};
};

inline void validate(const BenchPlan& p) {
  auto positive = [](const std::vector<int>& v, const char* what) {
    if (v.empty()) throw UsageError(std::string(what) + " must not be empty");
    for (int x : v)
      if (x <= 0) throw UsageError(std::string(what) + " values must be positive");
  };
  positive(p.time_steps, "T values");
  positive(p.hidden_sizes, "hidden sizes");
  positive(p.deltas, "delta values");
  if (p.methods.empty()) throw UsageError("no methods");
  for (const auto& m : p.methods)
    if (m != "dcs" && m != "smt") throw UsageError("unknown method '" + m + "'");
  if (p.input_size <= 0 || p.output_size <= 0 || p.samples <= 0 || p.repetitions <= 0 ||
      p.dcs_workers <= 0)
    throw UsageError("sizes, samples, repetitions and workers must be positive");
  if (p.deadline_s && *p.deadline_s <= 0) throw UsageError("deadline must be positive");
}

// One generated model with its fixed inputs and their original labels.
struct Instance {
  SnnModel model;
  std::vector<SpikeTimes> inputs;
  std::vector<int> labels;
};

// Weights and input intensities depend only on (seed, hidden) and the plan's
// shape, so cells that differ in T see the same network and the same inputs
// encoded at a different time resolution, and every delta and method of a
// cell sees identical instances.
inline Instance make_instance(const BenchPlan& p, int time_steps, int hidden) {
  ModelSpec spec;
  spec.layer_sizes = {p.input_size, hidden, p.output_size};
  spec.time_steps = time_steps;
  spec.tau = p.tau;
  spec.theta = p.theta;
  spec.weight_bits = p.weight_bits;
  const std::uint64_t base = derive_seed(p.seed, {std::uint64_t(hidden)});
  Instance inst{generate_model(spec, base), {}, {}};
  Rng rng(derive_seed(base, {0x1badull}));
  Simulator sim(inst.model);
  std::vector<double> pixels(p.input_size);
  for (int i = 0; i < p.samples; ++i) {
    for (double& v : pixels) v = static_cast<double>(rng.uniform_int(0, 255));
    inst.inputs.push_back(encode_intensities(pixels, 255.0, time_steps));
    inst.labels.push_back(predict(sim.run(inst.inputs.back().times)).label);
  }
  return inst;
}

// Report line for one verification run.
inline io::ReportRecord make_record(std::string id, const std::string& method, int delta,
                                    const Verdict& v, const SnnModel& model, const SpikeTimes& input) {
  io::ReportRecord r;
  r.instance_id = std::move(id);
  r.method = method;
  r.delta = delta;
  r.verdict = v.kind;
  if (v.counterexample) {
    r.counterexample = v.counterexample->input.times;
    r.output_times = v.counterexample->output_times;
  }
  if (method == "dcs") r.perturbations_checked = v.stats.perturbations_checked;
  r.wall_time_s = v.stats.wall_time.count();
  r.model_hash = model_hash(model);
  r.input_hash = input_hash(input.times);
  r.reason = v.reason;
  r.time_steps = model.config.time_steps;
  r.layer_sizes = model.config.layer_sizes;
  return r;
}

inline io::ReportRecord run_one(const BenchPlan& p, const std::string& method, const SnnModel& model,
                                const SpikeTimes& input, int label, int delta, std::string id) {
  Verdict v;
  if (method == "dcs") {
    DcsOptions opt;
    opt.workers = p.dcs_workers;
    if (p.deadline_s) opt.deadline = std::chrono::duration<double>(*p.deadline_s);
    v = dcs_verify(model, input, label, PerturbationBudget(delta), opt);
  } else {
    smt::SmtOptions opt;
    opt.solver_command = p.solver_command;
    if (p.deadline_s) opt.timeout = std::chrono::duration<double>(*p.deadline_s);
    v = smt::smt_verify(model, input, label, PerturbationBudget(delta), opt);
  }
  return make_record(std::move(id), method, delta, v, model, input);
}

// Runs the whole grid. Records are returned (and appended to report_path, if
// given) in grid order: T, hidden, sample, repetition, delta, method. Budgets
// and methods are interleaved per input so that slow drift of the machine
// does not land on one budget only.
inline std::vector<io::ReportRecord> run_bench(
    const BenchPlan& p, const std::optional<std::string>& report_path = std::nullopt) {
  validate(p);
  struct Cell {
    int T, hidden;
  };
  std::vector<Cell> cells;
  for (int T : p.time_steps)
    for (int h : p.hidden_sizes) cells.push_back({T, h});

  std::vector<std::vector<io::ReportRecord>> per_cell(cells.size());
  auto run_cell = [&](std::size_t c) {
    const Instance inst = make_instance(p, cells[c].T, cells[c].hidden);
    for (int i = 0; i < p.samples; ++i)
      for (int rep = 0; rep < p.repetitions; ++rep)
        for (int delta : p.deltas)
          for (const auto& method : p.methods) {
            std::ostringstream id;
            id << "T" << cells[c].T << "-h" << cells[c].hidden << "-i" << i << "-r" << rep;
            per_cell[c].push_back(
                run_one(p, method, inst.model, inst.inputs[i], inst.labels[i], delta, id.str()));
          }
  };
  if (p.parallel_cells) {
    std::vector<std::jthread> pool;
    for (std::size_t c = 0; c < cells.size(); ++c) pool.emplace_back(run_cell, c);
  } else {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  }

  std::vector<io::ReportRecord> all;
  for (auto& v : per_cell)
    for (auto& r : v) all.push_back(std::move(r));
  if (report_path)
    for (const auto& r : all) io::append_report(r, *report_path);
  return all;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

// Ordinary least squares y = intercept + slope * x.
inline LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw UsageError("fit needs at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw UsageError("fit needs at least two distinct x values");
  LinearFit f;
  f.points = static_cast<int>(xs.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    ss_res += e * e;
  }
  f.r_squared = syy == 0 ? (ss_res == 0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
  return f;
}

struct CellSummary {
  std::string method;
  std::vector<int> layer_sizes;
  int time_steps = 0;
  int delta = 0;
  io::TimeStats completed;   // robust + not robust
  io::TimeStats robust;
  io::TimeStats not_robust;
  long long timeouts = 0;    // unknown verdicts, excluded from the means
};

struct TrendFit {
  std::string method;
  std::vector<int> layer_sizes;
  int delta = 0;
  std::optional<LinearFit> completed;  // mean time of completed runs vs T
  std::optional<LinearFit> robust;     // mean time of robust runs vs T
};

struct BenchSummary {
  std::vector<CellSummary> cells;
  std::vector<TrendFit> fits;

  const CellSummary* find(const std::string& method, int time_steps, int delta) const {
    for (const auto& c : cells)
      if (c.method == method && c.time_steps == time_steps && c.delta == delta) return &c;
    return nullptr;
  }
};

inline BenchSummary summarize_bench(const std::vector<io::ReportRecord>& records) {
  using Key = std::tuple<std::string, std::vector<int>, int, int>;  // method, sizes, delta, T
  struct Acc {
    std::vector<double> completed, robust, not_robust;
    long long timeouts = 0;
  };
  std::map<Key, Acc> acc;
  for (const auto& r : records) {
    Acc& a = acc[{r.method, r.layer_sizes, r.delta, r.time_steps}];
    switch (r.verdict) {
      case VerdictKind::kRobust:
        a.robust.push_back(r.wall_time_s);
        a.completed.push_back(r.wall_time_s);
        break;
      case VerdictKind::kNotRobust:
        a.not_robust.push_back(r.wall_time_s);
        a.completed.push_back(r.wall_time_s);
        break;
      case VerdictKind::kUnknown:
        ++a.timeouts;
        break;
    }
  }
  BenchSummary s;
  std::map<std::tuple<std::string, std::vector<int>, int>, std::vector<const CellSummary*>> series;
  for (const auto& [key, a] : acc) {
    CellSummary c;
    std::tie(c.method, c.layer_sizes, c.delta, c.time_steps) = key;
    c.completed = io::time_stats(a.completed);
    c.robust = io::time_stats(a.robust);
    c.not_robust = io::time_stats(a.not_robust);
    c.timeouts = a.timeouts;
    s.cells.push_back(std::move(c));
  }
  for (const auto& c : s.cells) series[{c.method, c.layer_sizes, c.delta}].push_back(&c);
  for (const auto& [key, cs] : series) {
    TrendFit f;
    std::tie(f.method, f.layer_sizes, f.delta) = key;
    auto fit_on = [&](auto pick) -> std::optional<LinearFit> {
      std::vector<double> xs, ys;
      for (const CellSummary* c : cs) {
        const io::TimeStats& t = pick(*c);
        if (t.count == 0) continue;
        xs.push_back(c->time_steps);
        ys.push_back(t.mean);
      }
      if (xs.size() < 2) return std::nullopt;
      return fit_line(xs, ys);
    };
    f.completed = fit_on([](const CellSummary& c) -> const io::TimeStats& { return c.completed; });
    f.robust = fit_on([](const CellSummary& c) -> const io::TimeStats& { return c.robust; });
    s.fits.push_back(std::move(f));
  }
  return s;
}

namespace detail {

inline std::string join_sizes(const std::vector<int>& v, char sep = '-') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::string mean_sd(const io::TimeStats& t) {
  if (t.count == 0) return "-";
  std::ostringstream os;
  os << std::setprecision(4) << t.mean << " +- " << t.stddev << " (n=" << t.count << ")";
  return os.str();
}

}  // namespace detail

inline std::string format_table(const BenchSummary& s) {
  std::ostringstream os;
  os << std::left << std::setw(8) << "method" << std::setw(14) << "layers" << std::setw(6) << "T"
     << std::setw(7) << "delta" << std::setw(32) << "robust [s]" << std::setw(32)
     << "not robust [s]" << "timeouts\n";
  for (const auto& c : s.cells)
    os << std::setw(8) << c.method << std::setw(14) << detail::join_sizes(c.layer_sizes)
       << std::setw(6) << c.time_steps << std::setw(7) << c.delta << std::setw(32)
       << detail::mean_sd(c.robust) << std::setw(32) << detail::mean_sd(c.not_robust)
       << c.timeouts << "\n";
  for (const auto& f : s.fits) {
    os << "fit " << f.method << " layers " << detail::join_sizes(f.layer_sizes) << " delta "
       << f.delta << ":";
    if (f.completed)
      os << " all-runs slope " << f.completed->slope << " s/step, R^2 " << f.completed->r_squared;
    if (f.robust) os << "; robust-runs R^2 " << f.robust->r_squared;
    if (!f.completed && !f.robust) os << " (fewer than two T values)";
    os << "\n";
  }
  return os.str();
}

inline std::string format_csv(const BenchSummary& s) {
  std::ostringstream os;
  os << std::setprecision(9);
  os << "method,layers,T,delta,completed_n,completed_mean_s,completed_sd_s,robust_n,robust_mean_s,"
        "robust_sd_s,not_robust_n,not_robust_mean_s,not_robust_sd_s,timeouts\n";
  for (const auto& c : s.cells)
    os << c.method << "," << detail::join_sizes(c.layer_sizes) << "," << c.time_steps << ","
       << c.delta << "," << c.completed.count << "," << c.completed.mean << ","
       << c.completed.stddev << "," << c.robust.count << "," << c.robust.mean << ","
       << c.robust.stddev << "," << c.not_robust.count << "," << c.not_robust.mean << ","
       << c.not_robust.stddev << "," << c.timeouts << "\n";
  return os.str();
}

}  // namespace snnv::bench
