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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "snnv/dcs.hpp"
#include "snnv/random.hpp"
#include "snnv/smt/constraints.hpp"
#include "snnv/smt/solver.hpp"
#include "test_util.hpp"

namespace snnv::smt {
namespace {

using snnv::testing::make_model;
using snnv::testing::solver_available;
using snnv::testing::solver_command;
using snnv::testing::zero_model;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Writes an executable shell script that prints `reply` and exits.
std::string fake_solver(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / ("snnv_fake_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << "#!/bin/sh\ncat > /dev/null\n" << body;
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path.string();
}

#define REQUIRE_SOLVER()                                          \
  if (!solver_available()) GTEST_SKIP() << "no SMT solver on PATH"

TEST(ExactDecimal, KnownSpellings) {
  EXPECT_EQ(exact_decimal(0.0), "0.0");
  EXPECT_EQ(exact_decimal(3.0), "3.0");
  EXPECT_EQ(exact_decimal(-3.0), "-3.0");
  EXPECT_EQ(exact_decimal(0.5859375), "0.5859375");
  EXPECT_EQ(exact_decimal(-0.0009765625), "-0.0009765625");
  EXPECT_EQ(exact_decimal(0.1), "0.1000000000000000055511151231257827021181583404541015625");
  EXPECT_EQ(exact_decimal(1024.0), "1024.0");
  EXPECT_THROW(exact_decimal(std::nan("")), DomainError);
  EXPECT_THROW(exact_decimal(INFINITY), DomainError);
}

TEST(ExactDecimal, ParsesBackToTheSameBinaryValue) {
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(static_cast<double>(rng.uniform_int(-(1LL << 53), 1LL << 53)),
                                static_cast<int>(rng.uniform_int(-80, 20)));
    const std::string text = exact_decimal(v);
    const Rational back = text[0] == '-' ? -detail::parse_decimal(text.substr(1)) : detail::parse_decimal(text);
    EXPECT_EQ(back, Rational(v)) << v;
  }
}

TEST(ParseDecimal, LeadingZerosAreDecimal) {
  EXPECT_EQ(detail::parse_decimal("0.09"), Rational(9, 100));
  EXPECT_EQ(detail::parse_decimal("010"), Rational(10));
  EXPECT_EQ(detail::parse_decimal("0.0"), Rational(0));
  EXPECT_EQ(detail::parse_decimal("12.50"), Rational(25, 2));
  EXPECT_THROW(detail::parse_decimal("1e3"), DecodeError);
  EXPECT_THROW(detail::parse_decimal("-1"), DecodeError);
}

TEST(Literals, NegativeNumbersUseUnaryMinus) {
  EXPECT_EQ(to_smtlib(int_lit(-4)), "(- 4)");
  EXPECT_EQ(to_smtlib(int_lit(4)), "4");
  EXPECT_EQ(to_smtlib(real_lit(-0.5)), "(- 0.5)");
  EXPECT_EQ(to_smtlib(and_({})), "true");
  EXPECT_EQ(to_smtlib(or_({})), "false");
  EXPECT_EQ(to_smtlib(or_({var("x", Sort::kBool)})), "x");
}

class TinyQuery : public ::testing::Test {
 protected:
  SnnModel model = make_model({2, 1}, 4, 1, 1.0, {{0.5, 0.75}});
  SpikeTimes input{0, {0, 1}};
};

TEST_F(TinyQuery, VariableInventory) {
  const ConstraintSystem cs = build_constraints(model, input, 0, PerturbationBudget(1));
  EXPECT_EQ(cs.spike_variables(), 3u);
  EXPECT_EQ(cs.potential_variables(), 4u);
  EXPECT_EQ(cs.flag_variables(), 4u);
  EXPECT_EQ(cs.shift_variables(), 2u);
  EXPECT_EQ(cs.declarations.size(), 13u);
  EXPECT_TRUE(undeclared_references(cs).empty());
  std::set<std::string> names;
  for (const auto& d : cs.declarations) names.insert(d.name);
  EXPECT_EQ(names.size(), cs.declarations.size());
}

TEST_F(TinyQuery, AssertionsAreGroupedInFamilyOrder) {
  const ConstraintSystem cs = build_constraints(model, input, 0, PerturbationBudget(1));
  EXPECT_TRUE(std::is_sorted(cs.assertions.begin(), cs.assertions.end(),
                             [](const Assertion& a, const Assertion& b) { return a.origin < b.origin; }));
  std::set<Constraint> seen;
  for (const auto& a : cs.assertions) seen.insert(a.origin);
  EXPECT_EQ(seen.size(), 8u);
}

TEST(GoldenScript, TwoOutputQuery) {
  const SnnModel model = make_model({2, 2}, 4, 1, 1.0, {{0.5, -0.25, 0.75, 0.5}});
  const std::string script =
      emit_smtlib(build_constraints(model, SpikeTimes{0, {0, 1}}, 1, PerturbationBudget(1)));
  EXPECT_EQ(script, read_file(std::string(SNNV_FIXTURE_DIR) + "/tiny_query.smt2"));
}

TEST_F(TinyQuery, EmissionIsByteStable) {
  const std::string a = emit_smtlib(build_constraints(model, input, 0, PerturbationBudget(1)));
  const std::string b = emit_smtlib(build_constraints(model, input, 0, PerturbationBudget(1)));
  EXPECT_EQ(a, b);
  const std::string c = emit_smtlib(build_constraints(model, input, 0, PerturbationBudget(2)));
  EXPECT_NE(a, c);
}

TEST_F(TinyQuery, UsageErrors) {
  EXPECT_THROW(build_constraints(model, input, 1, PerturbationBudget(1)), UsageError);
  EXPECT_THROW(build_constraints(model, SpikeTimes{0, {0, 4}}, 0, PerturbationBudget(1)), UsageError);
}

TEST(ParseSolverOutput, StatusAndModel) {
  auto r = parse_solver_output(
      "sat\n(\n  (define-fun s_0_0 () Int 2)\n  (define-fun y () Real (- (/ 1.0 2.0)))\n"
      "  (define-fun a () Bool true)\n  (define-fun z () Real (/ 3 4))\n  (define-fun w () Int (- 7))\n)\n");
  ASSERT_EQ(r.status, SolverStatus::kSat);
  const Assignment& m = *r.assignment;
  EXPECT_EQ(std::get<Rational>(m.at("s_0_0")), Rational(2));
  EXPECT_EQ(std::get<Rational>(m.at("y")), Rational(-1, 2));
  EXPECT_EQ(std::get<bool>(m.at("a")), true);
  EXPECT_EQ(std::get<Rational>(m.at("z")), Rational(3, 4));
  EXPECT_EQ(std::get<Rational>(m.at("w")), Rational(-7));

  EXPECT_EQ(parse_solver_output("unsat\n(error \"line 9: model is not available\")\n").status,
            SolverStatus::kUnsat);
  EXPECT_EQ(parse_solver_output("unknown\n").status, SolverStatus::kUnknown);
}

TEST(ParseSolverOutput, MalformedOutputIsUnknownWithReason) {
  for (const char* raw : {"", "(((", "sat\n", "sat\n(model (define-fun x () Int", "hello"}) {
    const auto r = parse_solver_output(raw);
    EXPECT_EQ(r.status, SolverStatus::kUnknown) << raw;
    EXPECT_FALSE(r.reason.empty()) << raw;
    EXPECT_FALSE(r.assignment);
  }
}

TEST(ExtractCounterexample, Errors) {
  const ModelConfig cfg = zero_model({2, 1}, 4).config;
  EXPECT_THROW(extract_counterexample(parse_solver_output("unsat"), cfg), UsageError);
  EXPECT_THROW(extract_counterexample(parse_solver_output("sat (model (define-fun s_0_0 () Int 1))"), cfg),
               DecodeError);
  EXPECT_THROW(extract_counterexample(
                   parse_solver_output("sat ((define-fun s_0_0 () Int 1) (define-fun s_0_1 () Int 9))"), cfg),
               DecodeError);
  EXPECT_THROW(extract_counterexample(
                   parse_solver_output("sat ((define-fun s_0_0 () Real 0.5) (define-fun s_0_1 () Int 1))"), cfg),
               DecodeError);
  const auto ok = extract_counterexample(
      parse_solver_output("sat ((define-fun s_0_1 () Int 3) (define-fun s_0_0 () Int 1))"), cfg);
  EXPECT_EQ(ok.times, (std::vector<int>{1, 3}));
}

TEST(Solve, SatUnsatAndFailures) {
  REQUIRE_SOLVER();
  const auto cmd = solver_command();
  EXPECT_EQ(solve("(assert false)\n(check-sat)\n", cmd).status, SolverStatus::kUnsat);
  const auto sat = solve("(declare-fun x () Int)\n(assert (> x 2))\n(check-sat)\n(get-model)\n", cmd);
  ASSERT_EQ(sat.status, SolverStatus::kSat);
  EXPECT_GT(std::get<Rational>(sat.assignment->at("x")), 2);

  const auto missing = solve("(check-sat)\n", "/nonexistent/solver-binary");
  EXPECT_EQ(missing.status, SolverStatus::kUnknown);
  EXPECT_NE(missing.reason.find("failed to start"), std::string::npos);
}

TEST(Solve, TimeoutIsUnknown) {
  const std::string slow = fake_solver("slow.sh", "sleep 5\necho unsat\n");
  const auto start = std::chrono::steady_clock::now();
  const auto r = solve("(check-sat)\n", slow, std::chrono::milliseconds(200));
  EXPECT_EQ(r.status, SolverStatus::kUnknown);
  EXPECT_EQ(r.reason, "timeout");
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(4));
}

TEST(SmtVerify, ReplayRejectsInconsistentModels) {
  // Output neuron claimed at t = 2 although the zero-weight network forces T-1.
  const SnnModel m = zero_model({2, 2}, 4);
  const std::string liar = fake_solver(
      "liar.sh",
      "echo sat\necho '((define-fun s_0_0 () Int 0) (define-fun s_0_1 () Int 1)"
      " (define-fun s_1_0 () Int 2) (define-fun s_1_1 () Int 2))'\n");
  SmtOptions opt;
  opt.solver_command = liar;
  EXPECT_THROW(smt_verify(m, SpikeTimes{0, {0, 1}}, 0, PerturbationBudget(1), opt), EncodingError);

  const std::string far = fake_solver(
      "far.sh",
      "echo sat\necho '((define-fun s_0_0 () Int 3) (define-fun s_0_1 () Int 3)"
      " (define-fun s_1_0 () Int 3) (define-fun s_1_1 () Int 3))'\n");
  opt.solver_command = far;
  EXPECT_THROW(smt_verify(m, SpikeTimes{0, {0, 1}}, 0, PerturbationBudget(1), opt), EncodingError);
}

TEST(SmtVerify, KnownVerdicts) {
  REQUIRE_SOLVER();
  SmtOptions opt;
  opt.solver_command = solver_command();
  // No rival outputs: the negated robustness constraint is empty.
  EXPECT_EQ(smt_verify(zero_model({2, 1}, 4), SpikeTimes{0, {0, 1}}, 0, PerturbationBudget(2), opt).kind,
            VerdictKind::kRobust);
  const Verdict tie = smt_verify(zero_model({1, 2}, 4), SpikeTimes{0, {2}}, 0, PerturbationBudget(0), opt);
  ASSERT_EQ(tie.kind, VerdictKind::kNotRobust);
  EXPECT_EQ(tie.counterexample->input.times, (std::vector<int>{2}));
  EXPECT_EQ(tie.counterexample->output_times, (std::vector<int>{3, 3}));
}

TEST(SmtVerify, DumpWritesTheExactScript) {
  const SnnModel m = zero_model({2, 2}, 4);
  const auto path = std::filesystem::temp_directory_path() / ("snnv_dump_" + std::to_string(::getpid()) + ".smt2");
  SmtOptions opt;
  opt.solver_command = "/nonexistent/solver-binary";
  opt.dump_path = path.string();
  const Verdict v = smt_verify(m, SpikeTimes{0, {0, 1}}, 0, PerturbationBudget(1), opt);
  EXPECT_EQ(v.kind, VerdictKind::kUnknown);
  EXPECT_EQ(read_file(path.string()),
            emit_smtlib(build_constraints(m, SpikeTimes{0, {0, 1}}, 0, PerturbationBudget(1))));
  std::filesystem::remove(path);
}

TEST(SmtVerify, AgreesWithDcsOnRandomInstances) {
  REQUIRE_SOLVER();
  SmtOptions opt;
  opt.solver_command = solver_command();
  Rng rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    const int T = static_cast<int>(rng.uniform_int(3, 6));
    const SnnModel m = generate_model({{3, 3, 2}, T, 1, 1.0, 10}, rng.uniform_int(0, 1 << 30));
    const SpikeTimes in = random_input(3, T, rng);
    const int label = infer(m, in).label;
    const PerturbationBudget b(static_cast<int>(rng.uniform_int(0, 2)));
    const Verdict smt = smt_verify(m, in, label, b, opt);
    const Verdict dcs = dcs_verify(m, in, label, b);
    EXPECT_EQ(smt.kind, dcs.kind) << "trial " << trial;
  }
}

}  // namespace
}  // namespace snnv::smt
