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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "snnv/errors.hpp"

namespace snnv {

using BigInt = boost::multiprecision::cpp_int;

// Natural log of a non-negative big integer; -inf for zero.
inline double log_of(const BigInt& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  if (x.sign() < 0) throw DomainError("log of a negative integer");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

// Binomial coefficient C(n, k) computed exactly; zero when k is out of range.
inline BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// ln C(n, k) via lgamma, for sizes where the exact value is not wanted.
inline double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline std::size_t decimal_digits(const BigInt& x) {
  if (x.is_zero()) return 1;
  return x.str().size() - (x.sign() < 0 ? 1 : 0);
}

}  // namespace snnv
