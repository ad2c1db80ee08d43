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

// Constraint system whose satisfiability witnesses a robustness violation:
// network semantics (spike ranges, potentials, fired flags, spike rules),
// the L1 budget on the input shift, and the negated strict-win condition.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "snnv/errors.hpp"
#include "snnv/hash.hpp"
#include "snnv/perturbation.hpp"
#include "snnv/smt/expr.hpp"
#include "snnv/snn.hpp"
#include "snnv/trace_check.hpp"

namespace snnv::smt {

inline std::string spike_name(int l, int n) {
  return "s_" + std::to_string(l) + "_" + std::to_string(n);
}
inline std::string potential_name(int l, int t, int n) {
  return "p_" + std::to_string(l) + "_" + std::to_string(t) + "_" + std::to_string(n);
}
inline std::string flag_name(int l, int t, int n) {
  return "a_" + std::to_string(l) + "_" + std::to_string(t) + "_" + std::to_string(n);
}
inline std::string shift_name(int n) { return "d_" + std::to_string(n); }

struct Declaration {
  std::string name;
  Sort sort;
};

struct Assertion {
  Constraint origin;
  ExprPtr formula;
};

struct ConstraintMetadata {
  std::string model_hash;
  std::string input_hash;
  int delta = 0;
  int label = 0;
  int time_steps = 0;
  std::vector<int> layer_sizes;
};

struct ConstraintSystem {
  std::vector<Declaration> declarations;
  std::vector<Assertion> assertions;  // ordered by origin
  ConstraintMetadata metadata;

  std::size_t count_prefix(char c) const {
    return static_cast<std::size_t>(std::count_if(
        declarations.begin(), declarations.end(),
        [c](const Declaration& d) { return d.name.front() == c; }));
  }
  std::size_t spike_variables() const { return count_prefix('s'); }
  std::size_t potential_variables() const { return count_prefix('p'); }
  std::size_t flag_variables() const { return count_prefix('a'); }
  std::size_t shift_variables() const { return count_prefix('d'); }
};

// Names referenced by some assertion but never declared. Empty for every
// system produced by build_constraints.
inline std::vector<std::string> undeclared_references(const ConstraintSystem& cs) {
  std::set<std::string> declared;
  for (const auto& d : cs.declarations) declared.insert(d.name);
  std::set<std::string> missing;
  for (const auto& a : cs.assertions)
    for_each_var(*a.formula, [&](const Expr& v) {
      if (!declared.count(v.text)) missing.insert(v.text);
    });
  return {missing.begin(), missing.end()};
}

inline ConstraintSystem build_constraints(const SnnModel& model, const SpikeTimes& input,
                                          int label, PerturbationBudget budget) {
  validate(model);
  validate_input(model.config, input);
  const ModelConfig& cfg = model.config;
  const int T = cfg.time_steps;
  const int L = cfg.num_layers();
  const int tau = cfg.tau;
  const auto& sizes = cfg.layer_sizes;
  if (label < 0 || label >= cfg.output_size()) throw UsageError("label outside the output layer");

  ConstraintSystem cs;
  cs.metadata = {model_hash(model), input_hash(input.times), budget.delta, label, T, sizes};

  auto declare = [&](std::string name, Sort sort) {
    cs.declarations.push_back({name, sort});
    return var(std::move(name), sort);
  };

  std::vector<std::vector<ExprPtr>> s(L + 1);
  for (int l = 0; l <= L; ++l)
    for (int n = 0; n < sizes[l]; ++n) s[l].push_back(declare(spike_name(l, n), Sort::kInt));
  // p[l][t * N_l + n], a[l][t * N_l + n]
  std::vector<std::vector<ExprPtr>> p(L + 1), a(L + 1);
  for (int l = 1; l <= L; ++l)
    for (int t = 0; t < T; ++t)
      for (int n = 0; n < sizes[l]; ++n) p[l].push_back(declare(potential_name(l, t, n), Sort::kReal));
  for (int l = 1; l <= L; ++l)
    for (int t = 0; t < T; ++t)
      for (int n = 0; n < sizes[l]; ++n) a[l].push_back(declare(flag_name(l, t, n), Sort::kBool));
  std::vector<ExprPtr> d;
  for (int n = 0; n < sizes[0]; ++n) d.push_back(declare(shift_name(n), Sort::kInt));

  auto P = [&](int l, int t, int n) { return p[l][static_cast<std::size_t>(t) * sizes[l] + n]; };
  auto A = [&](int l, int t, int n) { return a[l][static_cast<std::size_t>(t) * sizes[l] + n]; };
  auto assert_ = [&](Constraint c, ExprPtr f) { cs.assertions.push_back({c, std::move(f)}); };
  const ExprPtr theta = real_lit(cfg.theta);

  for (int n = 0; n < sizes[0]; ++n)
    assert_(Constraint::kSpikeRange,
            and_({ge(s[0][n], int_lit(0)), le(s[0][n], int_lit(T - 1))}));
  for (int l = 1; l <= L; ++l)
    for (int n = 0; n < sizes[l]; ++n)
      assert_(Constraint::kSpikeRange,
              and_({ge(s[l][n], int_lit(static_cast<long long>(tau) * l)),
                    le(s[l][n], int_lit(T - 1))}));

  for (int l = 1; l <= L; ++l)
    for (int n = 0; n < sizes[l]; ++n) assert_(Constraint::kPotentialInit, eq(P(l, 0, n), real_lit(0.0)));

  for (int l = 1; l <= L; ++l) {
    const WeightMatrix& w = model.weights[l - 1];
    for (int n = 0; n < sizes[l]; ++n)
      for (int t = 1; t < T; ++t) {
        std::vector<ExprPtr> terms;
        for (int m = 0; m < w.rows; ++m)
          terms.push_back(ite(le(s[l - 1][m], int_lit(t)), real_lit(w(m, n)), real_lit(0.0)));
        assert_(Constraint::kPotentialSum, eq(P(l, t, n), sum(std::move(terms), Sort::kReal)));
      }
  }

  for (int l = 1; l <= L; ++l)
    for (int n = 0; n < sizes[l]; ++n) {
      // The flag at t = 0 is the empty disjunction.
      assert_(Constraint::kFiredFlag, eq(A(l, 0, n), bool_lit(false)));
      for (int t = 1; t < T; ++t) {
        std::vector<ExprPtr> crossed;
        for (int u = 0; u < t; ++u) crossed.push_back(ge(P(l, u, n), theta));
        assert_(Constraint::kFiredFlag, eq(A(l, t, n), or_(std::move(crossed))));
      }
    }

  for (int l = 1; l <= L; ++l)
    for (int n = 0; n < sizes[l]; ++n)
      for (int t = tau * l; t <= T - 2; ++t)
        assert_(Constraint::kSpikeOnCrossing,
                eq(and_({not_(A(l, t - tau, n)), ge(P(l, t - tau, n), theta)}),
                   eq(s[l][n], int_lit(t))));

  for (int l = 1; l <= L; ++l)
    for (int n = 0; n < sizes[l]; ++n)
      assert_(Constraint::kForcedSpike,
              eq(not_(A(l, T - 1 - tau, n)), eq(s[l][n], int_lit(T - 1))));

  // |s_0n - x_n| <= d_n, sum d_n <= delta.
  for (int n = 0; n < sizes[0]; ++n) {
    const ExprPtr x = int_lit(input.times[n]);
    assert_(Constraint::kInputBudget, ge(d[n], sub(s[0][n], x)));
    assert_(Constraint::kInputBudget, ge(d[n], sub(x, s[0][n])));
    assert_(Constraint::kInputBudget, ge(d[n], int_lit(0)));
  }
  assert_(Constraint::kInputBudget, le(sum(d, Sort::kInt), int_lit(budget.delta)));

  // Negated robustness: some competitor spikes no later than the label.
  std::vector<ExprPtr> rivals;
  for (int n = 0; n < sizes[L]; ++n)
    if (n != label) rivals.push_back(le(s[L][n], s[L][label]));
  assert_(Constraint::kRobustness, or_(std::move(rivals)));

  return cs;
}

// Byte-stable SMT-LIB 2 script: header comments, logic, declarations,
// assertions grouped by constraint family, check-sat, get-model.
inline std::string emit_smtlib(const ConstraintSystem& cs) {
  std::string out;
  const auto& md = cs.metadata;
  out += "; snnv robustness query\n";
  out += "; model " + md.model_hash + " input " + md.input_hash + " delta " +
         std::to_string(md.delta) + " label " + std::to_string(md.label) + "\n";
  out += "(set-option :produce-models true)\n";
  out += "(set-logic QF_LIRA)\n";
  for (const auto& d : cs.declarations) {
    out += "(declare-fun ";
    out += d.name;
    out += " () ";
    out += sort_name(d.sort);
    out += ")\n";
  }
  int group = 0;
  for (const auto& a : cs.assertions) {
    if (static_cast<int>(a.origin) != group) {
      group = static_cast<int>(a.origin);
      out += "; " + constraint_id(a.origin) + "\n";
    }
    out += "(assert ";
    write_smtlib(*a.formula, out);
    out += ")\n";
  }
  out += "(check-sat)\n(get-model)\n";
  return out;
}

}  // namespace snnv::smt
