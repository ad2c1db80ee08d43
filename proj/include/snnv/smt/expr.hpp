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

// Minimal typed term representation for quantifier-free linear arithmetic,
// printed in SMT-LIB 2 syntax.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "snnv/bigint.hpp"
#include "snnv/errors.hpp"

namespace snnv::smt {

enum class Sort { kBool, kInt, kReal };

inline const char* sort_name(Sort s) {
  switch (s) {
    case Sort::kBool: return "Bool";
    case Sort::kInt: return "Int";
    case Sort::kReal: return "Real";
  }
  return "?";
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kVar, kLiteral, kApp };
  Kind kind;
  Sort sort;
  std::string text;  // variable name, literal spelling, or operator symbol
  std::vector<ExprPtr> args;
};

inline ExprPtr var(std::string name, Sort sort) {
  return std::make_shared<Expr>(Expr{Expr::Kind::kVar, sort, std::move(name), {}});
}

inline ExprPtr bool_lit(bool v) {
  return std::make_shared<Expr>(Expr{Expr::Kind::kLiteral, Sort::kBool, v ? "true" : "false", {}});
}

inline ExprPtr app(std::string op, Sort sort, std::vector<ExprPtr> args) {
  return std::make_shared<Expr>(Expr{Expr::Kind::kApp, sort, std::move(op), std::move(args)});
}

inline ExprPtr int_lit(long long v) {
  if (v < 0) return app("-", Sort::kInt, {int_lit(-v)});
  return std::make_shared<Expr>(Expr{Expr::Kind::kLiteral, Sort::kInt, std::to_string(v), {}});
}

// Exact decimal spelling of a finite binary64 value, e.g. 0.5859375 or 3.0.
// Every finite double is m * 2^e, and 2^-k = 5^k / 10^k, so the expansion
// always terminates.
inline std::string exact_decimal(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value has no decimal literal");
  if (v == 0.0) return "0.0";
  int exp = 0;
  const double frac = std::frexp(std::fabs(v), &exp);
  // frac in [0.5, 1): scale to a 53-bit integer mantissa.
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  exp -= 53;
  BigInt m = mant;
  std::string digits;
  int scale = 0;
  if (exp >= 0) {
    m <<= exp;
  } else {
    scale = -exp;
    BigInt five = 1;
    for (int i = 0; i < scale; ++i) five *= 5;
    m *= five;
  }
  digits = m.str();
  std::string out;
  if (scale == 0) {
    out = digits + ".0";
  } else {
    if (static_cast<int>(digits.size()) <= scale)
      digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1, '0');
    out = digits.substr(0, digits.size() - scale) + "." + digits.substr(digits.size() - scale);
    while (out.back() == '0' && out[out.size() - 2] != '.') out.pop_back();
  }
  return (v < 0 ? "-" : "") + out;
}

inline ExprPtr real_lit(double v) {
  const std::string s = exact_decimal(v);
  if (s.front() == '-') {
    auto pos = std::make_shared<Expr>(Expr{Expr::Kind::kLiteral, Sort::kReal, s.substr(1), {}});
    return app("-", Sort::kReal, {pos});
  }
  return std::make_shared<Expr>(Expr{Expr::Kind::kLiteral, Sort::kReal, s, {}});
}

inline ExprPtr not_(ExprPtr a) { return app("not", Sort::kBool, {std::move(a)}); }

// n-ary connectives collapse to their single argument, or to the neutral
// literal when empty.
inline ExprPtr and_(std::vector<ExprPtr> xs) {
  if (xs.empty()) return bool_lit(true);
  if (xs.size() == 1) return xs.front();
  return app("and", Sort::kBool, std::move(xs));
}

inline ExprPtr or_(std::vector<ExprPtr> xs) {
  if (xs.empty()) return bool_lit(false);
  if (xs.size() == 1) return xs.front();
  return app("or", Sort::kBool, std::move(xs));
}

inline ExprPtr eq(ExprPtr a, ExprPtr b) { return app("=", Sort::kBool, {std::move(a), std::move(b)}); }
inline ExprPtr le(ExprPtr a, ExprPtr b) { return app("<=", Sort::kBool, {std::move(a), std::move(b)}); }
inline ExprPtr ge(ExprPtr a, ExprPtr b) { return app(">=", Sort::kBool, {std::move(a), std::move(b)}); }

inline ExprPtr sub(ExprPtr a, ExprPtr b) {
  const Sort s = a->sort;
  return app("-", s, {std::move(a), std::move(b)});
}

inline ExprPtr sum(std::vector<ExprPtr> xs, Sort sort) {
  if (xs.empty()) return sort == Sort::kInt ? int_lit(0) : real_lit(0.0);
  if (xs.size() == 1) return xs.front();
  return app("+", sort, std::move(xs));
}

inline ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b) {
  const Sort s = a->sort;
  return app("ite", s, {std::move(c), std::move(a), std::move(b)});
}

inline void write_smtlib(const Expr& e, std::string& out) {
  if (e.kind != Expr::Kind::kApp) {
    out += e.text;
    return;
  }
  out += '(';
  out += e.text;
  for (const ExprPtr& a : e.args) {
    out += ' ';
    write_smtlib(*a, out);
  }
  out += ')';
}

inline std::string to_smtlib(const ExprPtr& e) {
  std::string out;
  write_smtlib(*e, out);
  return out;
}

template <class Fn>
void for_each_var(const Expr& e, Fn&& fn) {
  if (e.kind == Expr::Kind::kVar) fn(e);
  for (const ExprPtr& a : e.args) for_each_var(*a, fn);
}

}  // namespace snnv::smt
