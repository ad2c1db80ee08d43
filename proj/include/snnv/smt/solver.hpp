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

// Solver orchestration: feed an SMT-LIB 2 script to an external solver
// process, parse its verdict and model, and map a model back onto the input
// spike times it encodes.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "snnv/errors.hpp"
#include "snnv/perturbation.hpp"
#include "snnv/smt/constraints.hpp"
#include "snnv/smt/process.hpp"
#include "snnv/snn.hpp"
#include "snnv/verdict.hpp"

namespace snnv::smt {

using Rational = boost::multiprecision::cpp_rational;
using ModelValue = std::variant<bool, Rational>;
using Assignment = std::map<std::string, ModelValue>;

enum class SolverStatus { kSat, kUnsat, kUnknown };

inline std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::kSat: return "sat";
    case SolverStatus::kUnsat: return "unsat";
    case SolverStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

struct SolverOutcome {
  SolverStatus status = SolverStatus::kUnknown;
  std::optional<Assignment> assignment;  // present iff status is sat
  std::string raw;                       // solver stdout
  std::string reason;                    // why the status is unknown, if known
  std::chrono::duration<double> wall_time{0};
};

// S-expression reader for solver output.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(std::string_view text) : text_(text) {}

  // Parses every top-level expression; throws DecodeError on unbalanced input.
  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw DecodeError("unbalanced parenthesis in solver output");
        if (text_[pos_] == ')') {
          ++pos_;
          return e;
        }
        e.list.push_back(read());
      }
    }
    if (c == ')') throw DecodeError("unexpected ')' in solver output");
    if (c == '"') {
      std::size_t end = pos_ + 1;
      for (;;) {
        end = text_.find('"', end);
        if (end == std::string_view::npos) throw DecodeError("unterminated string in solver output");
        if (end + 1 < text_.size() && text_[end + 1] == '"') {
          end += 2;
          continue;
        }
        break;
      }
      e.atom = std::string(text_.substr(pos_, end + 1 - pos_));
      pos_ = end + 1;
      return e;
    }
    if (c == '|') {
      const std::size_t end = text_.find('|', pos_ + 1);
      if (end == std::string_view::npos) throw DecodeError("unterminated quoted symbol");
      e.atom = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return e;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      ++pos_;
    }
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Rational parse_decimal(const std::string& s) {
  const auto dot = s.find('.');
  const std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw DecodeError("not a numeral: '" + s + "'");
  // No leading zeros: the string constructor would read them as octal.
  const auto first = digits.find_first_not_of('0');
  const BigInt num(first == std::string::npos ? std::string("0") : digits.substr(first));
  BigInt den = 1;
  if (dot != std::string::npos)
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return Rational(num, den);
}

inline ModelValue eval_value(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom == "true") return true;
    if (e.atom == "false") return false;
    return parse_decimal(e.atom);
  }
  if (e.list.empty() || e.list.front().is_list) throw DecodeError("malformed model value");
  const std::string& op = e.list.front().atom;
  auto num = [](const SExpr& x) {
    const ModelValue v = eval_value(x);
    if (!std::holds_alternative<Rational>(v)) throw DecodeError("expected a numeric value");
    return std::get<Rational>(v);
  };
  if (op == "-" && e.list.size() == 2) return Rational(-num(e.list[1]));
  if (op == "-" && e.list.size() == 3) return Rational(num(e.list[1]) - num(e.list[2]));
  if (op == "/" && e.list.size() == 3) {
    const Rational d = num(e.list[2]);
    if (d == 0) throw DecodeError("division by zero in model value");
    return Rational(num(e.list[1]) / d);
  }
  if ((op == "to_real" || op == "to_int") && e.list.size() == 2) return num(e.list[1]);
  throw DecodeError("unsupported model value operator '" + op + "'");
}

inline void collect_definitions(const SExpr& e, Assignment& out) {
  if (!e.is_list) return;
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun" &&
      e.list[2].is_list && e.list[2].list.empty()) {
    out[e.list[1].atom] = eval_value(e.list[4]);
    return;
  }
  for (const SExpr& c : e.list) collect_definitions(c, out);
}

}  // namespace detail

// Parses raw solver stdout: the first sat/unsat/unknown token decides the
// status; on sat the following define-fun entries form the assignment.
inline SolverOutcome parse_solver_output(std::string raw) {
  SolverOutcome res;
  res.raw = std::move(raw);
  std::vector<SExpr> top;
  try {
    top = detail::SExprReader(res.raw).read_all();
  } catch (const DecodeError& e) {
    res.reason = std::string("malformed solver output: ") + e.what();
    return res;
  }
  std::size_t i = 0;
  for (; i < top.size(); ++i) {
    if (top[i].is_list) continue;
    const std::string& a = top[i].atom;
    if (a == "sat" || a == "unsat" || a == "unknown") break;
  }
  if (i == top.size()) {
    res.reason = "malformed solver output: no sat/unsat/unknown answer";
    return res;
  }
  const std::string& answer = top[i].atom;
  if (answer == "unsat") {
    res.status = SolverStatus::kUnsat;
    return res;
  }
  if (answer == "unknown") {
    res.reason = "solver answered unknown";
    return res;
  }
  try {
    Assignment asg;
    for (std::size_t j = i + 1; j < top.size(); ++j) detail::collect_definitions(top[j], asg);
    if (asg.empty()) {
      res.reason = "malformed solver output: sat without a model";
      return res;
    }
    res.status = SolverStatus::kSat;
    res.assignment = std::move(asg);
  } catch (const DecodeError& e) {
    res.reason = std::string("malformed solver model: ") + e.what();
  }
  return res;
}

inline constexpr std::string_view kDefaultSolverCommand = "z3 -in";

// Runs `solver_command` (split on whitespace) with the script on stdin.
// Spawn failures, timeouts and unparsable output come back as unknown.
inline SolverOutcome solve(std::string_view script, std::string_view solver_command,
                           std::optional<std::chrono::duration<double>> timeout = std::nullopt) {
  ProcessResult proc;
  try {
    proc = run_process(split_command(solver_command), script, timeout);
  } catch (const Error& e) {
    SolverOutcome res;
    res.reason = std::string("solver failed to start: ") + e.what();
    return res;
  }
  if (proc.timed_out) {
    SolverOutcome res;
    res.raw = std::move(proc.out);
    res.reason = "timeout";
    res.wall_time = proc.wall_time;
    return res;
  }
  SolverOutcome res = parse_solver_output(std::move(proc.out));
  res.wall_time = proc.wall_time;
  if (res.status == SolverStatus::kUnknown && !proc.err.empty())
    res.reason += " (stderr: " + proc.err.substr(0, 200) + ")";
  return res;
}

namespace detail {

inline int integer_value(const Assignment& asg, const std::string& name) {
  const auto it = asg.find(name);
  if (it == asg.end()) throw DecodeError("solver model lacks variable " + name);
  if (!std::holds_alternative<Rational>(it->second))
    throw DecodeError("variable " + name + " is not numeric");
  const Rational& v = std::get<Rational>(it->second);
  if (denominator(v) != 1) throw DecodeError("variable " + name + " is not integral");
  const BigInt n = numerator(v);
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
    throw DecodeError("variable " + name + " out of range");
  return n.convert_to<int>();
}

}  // namespace detail

// Reads the perturbed input s_0 from a sat model.
inline SpikeTimes extract_counterexample(const SolverOutcome& outcome, const ModelConfig& config) {
  if (outcome.status != SolverStatus::kSat || !outcome.assignment)
    throw UsageError("counterexamples exist only for sat outcomes");
  SpikeTimes out{0, {}};
  for (int n = 0; n < config.input_size(); ++n) {
    const int t = detail::integer_value(*outcome.assignment, spike_name(0, n));
    if (t < 0 || t > config.time_steps - 1)
      throw DecodeError(spike_name(0, n) + " = " + std::to_string(t) + " outside [0, T-1]");
    out.times.push_back(t);
  }
  return out;
}

// Spike times of layer l as assigned by the solver.
inline std::vector<int> extract_layer_times(const SolverOutcome& outcome, const ModelConfig& config,
                                            int layer) {
  if (!outcome.assignment) throw UsageError("no assignment");
  std::vector<int> out;
  for (int n = 0; n < config.layer_sizes[layer]; ++n)
    out.push_back(detail::integer_value(*outcome.assignment, spike_name(layer, n)));
  return out;
}

struct SmtOptions {
  std::string solver_command{kDefaultSolverCommand};
  std::optional<std::chrono::duration<double>> timeout;
  std::optional<std::string> dump_path;  // write the exact script here
};

// build -> emit -> solve -> decode. A sat model is replayed through the
// simulator; any disagreement raises EncodingError.
inline Verdict smt_verify(const SnnModel& model, const SpikeTimes& input, int label,
                          PerturbationBudget budget, const SmtOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const ConstraintSystem cs = build_constraints(model, input, label, budget);
  const std::string script = emit_smtlib(cs);
  if (options.dump_path) {
    std::ofstream f(*options.dump_path, std::ios::binary);
    if (!f) throw Error("cannot write " + *options.dump_path);
    f << script;
  }
  const SolverOutcome outcome = solve(script, options.solver_command, options.timeout);

  Verdict v;
  switch (outcome.status) {
    case SolverStatus::kUnsat:
      v.kind = VerdictKind::kRobust;
      break;
    case SolverStatus::kUnknown:
      v.kind = VerdictKind::kUnknown;
      v.reason = outcome.reason.empty() ? "unknown" : outcome.reason;
      break;
    case SolverStatus::kSat: {
      SpikeTimes perturbed = extract_counterexample(outcome, model.config);
      int mass = 0;
      for (std::size_t n = 0; n < perturbed.times.size(); ++n)
        mass += std::abs(perturbed.times[n] - input.times[n]);
      if (mass > budget.delta)
        throw EncodingError("solver counterexample exceeds the perturbation budget");
      Simulator sim(model);
      sim.run(perturbed.times);
      const NetworkTrace trace = sim.trace();
      for (int l = 1; l <= model.config.num_layers(); ++l)
        if (extract_layer_times(outcome, model.config, l) != trace.spike_times[l].times)
          throw EncodingError("solver spike times of layer " + std::to_string(l) +
                              " disagree with the simulator");
      const auto out = trace.output_times();
      if (strict_win_for(out, label))
        throw EncodingError("replayed solver counterexample is a strict win for the label");
      v.kind = VerdictKind::kNotRobust;
      v.counterexample =
          Counterexample{std::move(perturbed), predict(out), std::vector<int>(out.begin(), out.end())};
      break;
    }
  }
  v.stats.wall_time = std::chrono::steady_clock::now() - start;
  return v;
}

}  // namespace snnv::smt
