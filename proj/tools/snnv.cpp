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

// snnv: verify, count, gen-model, bench, import-mnist.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "snnv/snnv.hpp"

namespace {

using namespace snnv;

constexpr int kExitUsage = 3;
constexpr int kExitInput = 4;
constexpr int kExitInternal = 5;

int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::kRobust:
      return 0;
    case VerdictKind::kNotRobust:
      return 1;
    case VerdictKind::kUnknown:
      return 2;
  }
  return kExitInternal;
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct VerifyArgs {
  std::string model;
  std::vector<int> input;
  std::string inputs_file;
  int index = 0;
  std::optional<int> label;
  int delta = 1;
  std::string method = "dcs";
  std::string solver{smt::kDefaultSolverCommand};
  int workers = 1;
  std::optional<double> deadline;
  std::string report;
  std::string dump_smt;
  bool compat_exact_delta = false;
};

// One JSON object per line with a "times" array, as written by import-mnist.
SpikeTimes read_input_line(const std::string& path, int index) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  std::string line;
  for (int i = 0; std::getline(f, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (i++ != index) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      return SpikeTimes{0, j.at("times").get<std::vector<int>>()};
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path + " line for index " + std::to_string(index) + ": " + e.what());
    }
  }
  throw UsageError("index " + std::to_string(index) + " not found in " + path);
}

int cmd_verify(const VerifyArgs& a) {
  const SnnModel model = io::load_model(a.model);
  SpikeTimes input;
  if (!a.inputs_file.empty())
    input = read_input_line(a.inputs_file, a.index);
  else if (!a.input.empty())
    input = SpikeTimes{0, a.input};
  else
    throw UsageError("give --input or --inputs-file");
  validate_input(model.config, input);
  const Prediction original = infer(model, input);
  const int label = a.label.value_or(original.label);
  if (a.compat_exact_delta && a.method != "dcs")
    throw UsageError("--compat-exact-delta applies to --method dcs only");

  Verdict v;
  if (a.method == "dcs") {
    DcsOptions opt;
    opt.workers = a.workers;
    if (a.deadline) opt.deadline = std::chrono::duration<double>(*a.deadline);
    if (a.compat_exact_delta) opt.semantics = DeltaSemantics::kExactly;
    v = dcs_verify(model, input, label, PerturbationBudget(a.delta), opt);
  } else {
    smt::SmtOptions opt;
    opt.solver_command = a.solver;
    if (a.deadline) opt.timeout = std::chrono::duration<double>(*a.deadline);
    if (!a.dump_smt.empty()) opt.dump_path = a.dump_smt;
    v = smt::smt_verify(model, input, label, PerturbationBudget(a.delta), opt);
  }
  if (!a.dump_smt.empty() && a.method == "dcs")
    io::write_text_file(a.dump_smt, smt::emit_smtlib(smt::build_constraints(
                                        model, input, label, PerturbationBudget(a.delta))));

  std::cout << "verdict " << to_string(v.kind) << "\n";
  std::cout << "label " << label << " (original prediction " << original.label
            << (original.strict ? "" : ", tied") << ")\n";
  if (v.counterexample) {
    std::cout << "counterexample " << join(v.counterexample->input.times) << "\n";
    std::cout << "outputs " << join(v.counterexample->output_times) << " -> predicted "
              << v.counterexample->prediction.label << "\n";
  }
  if (!v.reason.empty()) std::cout << "reason " << v.reason << "\n";
  if (a.method == "dcs") std::cout << "checked " << v.stats.perturbations_checked << "\n";
  std::cout << "time " << v.stats.wall_time.count() << " s\n";
  if (!a.report.empty()) {
    const std::string id = std::filesystem::path(a.model).filename().string() + ":" +
                           input_hash(input.times);
    io::append_report(bench::make_record(id, a.method, a.delta, v, model, input), a.report);
  }
  return exit_code(v.kind);
}

std::string describe(const SpaceCount& c) {
  std::ostringstream os;
  os.precision(17);
  if (c.exact)
    os << c.exact->str();
  else
    os << "(beyond exact range)";
  os << "  ln " << c.ln_value;
  if (c.clamped) os << "  [budget exceeds NT, clamped]";
  return os.str();
}

struct CountArgs {
  int neurons = 0;
  int time_steps = 0;
  int delta = 1;
  std::string encoding = "both";
  std::vector<int> input;
};

int cmd_count(const CountArgs& a) {
  const PerturbationBudget budget(a.delta);
  if (!a.input.empty() && static_cast<int>(a.input.size()) != a.neurons)
    throw UsageError("--input has " + std::to_string(a.input.size()) + " times but N = " +
                     std::to_string(a.neurons));
  if (a.neurons < 1 || a.time_steps < 2) throw UsageError("need N >= 1 and T >= 2");
  const bool rate = a.encoding != "temporal";
  const bool temporal = a.encoding != "rate";
  std::cout.precision(17);
  if (rate) std::cout << "rate " << describe(count_rate(a.neurons, a.time_steps, budget)) << "\n";
  if (temporal) {
    if (!a.input.empty()) {
      for (int t : a.input)
        if (t < 0 || t >= a.time_steps) throw UsageError("input time outside [0, T-1]");
      std::cout << "temporal " << describe(count_temporal(a.input, a.time_steps, budget)) << "\n";
    } else {
      const TemporalBound b = temporal_upper_bound(a.neurons, budget);
      std::cout << "temporal-bound ln " << b.ln_bound << "\n";
    }
  }
  if (rate && temporal)
    std::cout << "ln f " << log_space_ratio(a.time_steps, a.neurons, a.delta) << "\n";
  return 0;
}

struct GenArgs {
  std::vector<int> layers;
  int time_steps = 16;
  int tau = 1;
  double theta = 1.0;
  int weight_bits = 10;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen_model(const GenArgs& a) {
  const SnnModel m = generate_model({a.layers, a.time_steps, a.tau, a.theta, a.weight_bits}, a.seed);
  const std::string provenance = "snnv gen-model seed " + std::to_string(a.seed) + " weight-bits " +
                                 std::to_string(a.weight_bits);
  if (a.out.empty() || a.out == "-")
    std::cout << io::model_to_json(m, provenance);
  else
    io::save_model(m, a.out, provenance);
  return 0;
}

struct BenchArgs {
  bench::BenchPlan plan;
  std::string report;
  std::string summary;
};

int cmd_bench(const BenchArgs& a) {
  const auto records =
      bench::run_bench(a.plan, a.report.empty() ? std::nullopt : std::optional(a.report));
  const bench::BenchSummary s = bench::summarize_bench(records);
  std::cout << bench::format_table(s);
  if (!a.summary.empty()) io::write_text_file(a.summary, bench::format_csv(s));
  return 0;
}

struct ImportArgs {
  std::string images;
  std::string labels;
  int factor = 4;
  int time_steps = 16;
  int limit = 0;
  std::string out;
};

int cmd_import_mnist(const ImportArgs& a) {
  const auto items = io::load_idx(a.images, a.labels);
  std::ofstream file;
  if (!a.out.empty() && a.out != "-") {
    file.open(a.out, std::ios::binary);
    if (!file) throw Error("cannot write " + a.out);
  }
  std::ostream& os = file.is_open() ? file : std::cout;
  const std::size_t n = a.limit > 0 ? std::min<std::size_t>(a.limit, items.size()) : items.size();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::ordered_json j;
    j["index"] = i;
    j["label"] = items[i].label;
    j["times"] = io::image_to_input(items[i].image, a.factor, a.time_steps).times;
    os << j.dump() << "\n";
  }
  if (file.is_open()) std::cerr << "wrote " << n << " inputs to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness verification for temporally coded spiking networks"};
  app.require_subcommand(1);
  int code = 0;

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Decide local robustness of one input");
  verify->add_option("--model", va.model, "Model JSON file")->required();
  verify->add_option("--input", va.input, "Input spike times, comma separated")->delimiter(',');
  verify->add_option("--inputs-file", va.inputs_file, "JSON lines file with a \"times\" array per line");
  verify->add_option("--index", va.index, "Line of --inputs-file to verify")->capture_default_str();
  verify->add_option("--label", va.label, "Target label (default: prediction on the input)");
  verify->add_option("--delta", va.delta, "Perturbation budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  verify->add_option("--method", va.method, "dcs or smt")->capture_default_str()->check(CLI::IsMember({"dcs", "smt"}));
  verify->add_option("--solver", va.solver, "SMT solver command reading SMT-LIB on stdin")->capture_default_str();
  verify->add_option("--workers", va.workers, "DCS worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--deadline", va.deadline, "Wall-clock limit in seconds");
  verify->add_option("--report", va.report, "Append the verdict to this JSON lines log");
  verify->add_option("--dump-smt", va.dump_smt, "Write the SMT-LIB query to this path");
  verify->add_flag("--compat-exact-delta", va.compat_exact_delta,
                   "DCS: only perturbations whose shifts sum to exactly delta");
  verify->callback([&] { code = cmd_verify(va); });

  CountArgs ca;
  auto* count = app.add_subcommand("count", "Size of the perturbation space");
  count->add_option("--N", ca.neurons, "Input neurons")->required();
  count->add_option("--T", ca.time_steps, "Time steps")->required();
  count->add_option("--delta", ca.delta, "Perturbation budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  count->add_option("--encoding", ca.encoding, "rate, temporal or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"rate", "temporal", "both"}));
  count->add_option("--input", ca.input, "Spike times for an exact temporal count")->delimiter(',');
  count->callback([&] { code = cmd_count(ca); });

  GenArgs ga;
  auto* gen = app.add_subcommand("gen-model", "Random model with dyadic weights");
  gen->add_option("--layers", ga.layers, "Layer sizes, comma separated")->delimiter(',')->required();
  gen->add_option("--T", ga.time_steps, "Time steps")->capture_default_str();
  gen->add_option("--tau", ga.tau, "Synaptic delay")->capture_default_str();
  gen->add_option("--theta", ga.theta, "Threshold")->capture_default_str();
  gen->add_option("--weight-bits", ga.weight_bits, "Weights are k * 2^-bits, |k| <= 2^bits")->capture_default_str();
  gen->add_option("--seed", ga.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", ga.out, "Output path (default stdout)");
  gen->callback([&] { code = cmd_gen_model(ga); });

  BenchArgs ba;
  auto& p = ba.plan;
  auto* bench_cmd = app.add_subcommand("bench", "Runtime study over a grid of T, hidden size and delta");
  bench_cmd->add_option("--T", p.time_steps, "Time steps")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--hidden", p.hidden_sizes, "Hidden layer sizes")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--delta", p.deltas, "Budgets")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--method", p.methods, "dcs and/or smt")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--input-size", p.input_size, "Input neurons")->capture_default_str();
  bench_cmd->add_option("--output-size", p.output_size, "Output neurons")->capture_default_str();
  bench_cmd->add_option("--samples", p.samples, "Fixed inputs per model")->capture_default_str();
  bench_cmd->add_option("--reps", p.repetitions, "Repetitions per input")->capture_default_str();
  bench_cmd->add_option("--seed", p.seed, "Generator seed")->capture_default_str();
  bench_cmd->add_option("--deadline", p.deadline_s, "Per-run limit in seconds");
  bench_cmd->add_option("--tau", p.tau, "Synaptic delay")->capture_default_str();
  bench_cmd->add_option("--theta", p.theta, "Threshold")->capture_default_str();
  bench_cmd->add_option("--weight-bits", p.weight_bits, "Weight grid granularity")->capture_default_str();
  bench_cmd->add_option("--workers", p.dcs_workers, "Threads inside one DCS run")->capture_default_str();
  bench_cmd->add_flag("--parallel-cells", p.parallel_cells, "Run grid cells concurrently");
  bench_cmd->add_option("--solver", p.solver_command, "SMT solver command")->capture_default_str();
  bench_cmd->add_option("--report", ba.report, "Append every run to this JSON lines log");
  bench_cmd->add_option("--summary", ba.summary, "Write the per-cell summary as CSV");
  bench_cmd->callback([&] { code = cmd_bench(ba); });

  ImportArgs ia;
  auto* imp = app.add_subcommand("import-mnist", "Convert IDX images to spike-time inputs");
  imp->add_option("--images", ia.images, "IDX image file")->required();
  imp->add_option("--labels", ia.labels, "IDX label file")->required();
  imp->add_option("--factor", ia.factor, "Block-mean pooling factor")->capture_default_str();
  imp->add_option("--T", ia.time_steps, "Time steps")->capture_default_str();
  imp->add_option("--limit", ia.limit, "Convert only the first N images (0 = all)")->capture_default_str();
  imp->add_option("--out", ia.out, "Output JSON lines path (default stdout)");
  imp->callback([&] { code = cmd_import_mnist(ia); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "snnv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "snnv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const EncodingError& e) {
    std::cerr << "snnv: internal inconsistency: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "snnv: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "snnv: " << e.what() << "\n";
    return kExitInternal;
  }
  return code;
}
