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

#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "snnv/perturbation.hpp"
#include "snnv/random.hpp"

namespace snnv {
namespace {

// Brute force over the whole grid [0, T-1]^N, in lexicographic order of the
// perturbed vector (which is also lexicographic in the shift vector).
std::vector<std::vector<int>> grid_ball(const std::vector<int>& s, int T, int delta, bool exact = false) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(s.size(), 0);
  for (;;) {
    int mass = 0;
    for (std::size_t i = 0; i < s.size(); ++i) mass += std::abs(cur[i] - s[i]);
    if (exact ? mass == delta : mass <= delta) out.push_back(cur);
    std::size_t i = s.size();
    while (i > 0 && cur[i - 1] == T - 1) cur[--i] = 0;
    if (i == 0) break;
    ++cur[i - 1];
  }
  return out;
}

// Flip sets of size 1..delta over N*T bits, by enumerating all bit masks.
long long brute_rate(int N, int T, int delta) {
  const int bits = N * T;
  long long count = 0;
  for (unsigned long long mask = 1; mask < (1ull << bits); ++mask)
    if (std::popcount(mask) <= delta) ++count;
  return count;
}

std::vector<std::vector<int>> stream_all(const std::vector<int>& s, int T, int delta,
                                         DeltaSemantics sem = DeltaSemantics::kAtMost) {
  std::vector<std::vector<int>> out;
  PerturbationStream st(s, T, PerturbationBudget(delta), sem);
  while (st.next()) out.emplace_back(st.times().begin(), st.times().end());
  return out;
}

TEST(Budget, RejectsNegative) { EXPECT_THROW(PerturbationBudget(-1), DomainError); }

TEST(Enumerate, SingleNeuron) {
  const auto all = enumerate_perturbations(SpikeTimes{0, {1}}, 3, PerturbationBudget(1));
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].times, std::vector<int>{0});
  EXPECT_EQ(all[1].times, std::vector<int>{1});
  EXPECT_EQ(all[2].times, std::vector<int>{2});
}

TEST(Enumerate, TwoNeuronsInLexOrder) {
  const auto all = stream_all({1, 1}, 3, 1);
  const std::vector<std::vector<int>> want{{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}};
  EXPECT_EQ(all, want);
}

TEST(Enumerate, ZeroBudgetIsTheOriginal) {
  const auto all = stream_all({0}, 3, 0);
  EXPECT_EQ(all, (std::vector<std::vector<int>>{{0}}));
}

TEST(Enumerate, MatchesBruteForceGrid) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int N = static_cast<int>(rng.uniform_int(1, 4));
    const int T = static_cast<int>(rng.uniform_int(1, 5));
    const int D = static_cast<int>(rng.uniform_int(0, 4));
    std::vector<int> s(N);
    for (int& x : s) x = static_cast<int>(rng.uniform_int(0, T - 1));
    EXPECT_EQ(stream_all(s, T, D), grid_ball(s, T, D));
    EXPECT_EQ(stream_all(s, T, D, DeltaSemantics::kExactly), grid_ball(s, T, D, true));
  }
}

TEST(Enumerate, ExactSemanticsMatchesRecursiveGenerator) {
  // Append once the budget reaches zero, otherwise branch over the clamped
  // shift range of neuron i.
  auto recurse = [](auto&& self, const std::vector<int>& x, int T, int budget, std::size_t i,
                    std::vector<int> eps, std::vector<std::vector<int>>& out) -> void {
    if (budget == 0) {
      std::vector<int> v(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) v[k] = x[k] + eps[k];
      out.push_back(v);
    } else if (i < x.size()) {
      for (int d = -std::min(x[i], budget); d <= std::min(T - 1 - x[i], budget); ++d) {
        auto e = eps;
        e[i] += d;
        self(self, x, T, budget - std::abs(d), i + 1, e, out);
      }
    }
  };
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int N = static_cast<int>(rng.uniform_int(1, 4));
    const int T = static_cast<int>(rng.uniform_int(1, 6));
    const int D = static_cast<int>(rng.uniform_int(0, 4));
    std::vector<int> s(N);
    for (int& x : s) x = static_cast<int>(rng.uniform_int(0, T - 1));
    std::vector<std::vector<int>> ref;
    recurse(recurse, s, T, D, 0, std::vector<int>(N, 0), ref);
    EXPECT_EQ(stream_all(s, T, D, DeltaSemantics::kExactly), ref);
  }
}

TEST(Enumerate, PartitionsConcatenateToTheFullStream) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int N = static_cast<int>(rng.uniform_int(1, 4));
    const int T = static_cast<int>(rng.uniform_int(1, 7));
    const int D = static_cast<int>(rng.uniform_int(0, 4));
    std::vector<int> s(N);
    for (int& x : s) x = static_cast<int>(rng.uniform_int(0, T - 1));
    std::vector<std::vector<int>> joined;
    for (int d : first_shift_partitions(s, T, PerturbationBudget(D))) {
      PerturbationStream st(s, T, PerturbationBudget(D), DeltaSemantics::kAtMost, d);
      while (st.next()) {
        EXPECT_EQ(st.shift()[0], d);
        joined.emplace_back(st.times().begin(), st.times().end());
      }
    }
    EXPECT_EQ(joined, stream_all(s, T, D));
  }
}

TEST(Enumerate, InfeasibleFirstShiftIsRejected) {
  std::vector<int> s{0, 1};
  EXPECT_THROW(PerturbationStream(s, 3, PerturbationBudget(1), DeltaSemantics::kAtMost, -1), UsageError);
}

TEST(CountTemporal, SmallCases) {
  EXPECT_EQ(*count_temporal(std::vector<int>{0}, 3, PerturbationBudget(2)).exact, 3);
  EXPECT_EQ(*count_temporal(std::vector<int>{1, 1}, 3, PerturbationBudget(1)).exact, 5);
  EXPECT_EQ(*count_temporal(std::vector<int>{4, 0, 7}, 8, PerturbationBudget(0)).exact, 1);
}

TEST(CountTemporal, MatchesGridAndStream) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int N = static_cast<int>(rng.uniform_int(1, 4));
    const int T = static_cast<int>(rng.uniform_int(1, 5));
    const int D = static_cast<int>(rng.uniform_int(0, 4));
    std::vector<int> s(N);
    for (int& x : s) x = static_cast<int>(rng.uniform_int(0, T - 1));
    const SpaceCount c = count_temporal(s, T, PerturbationBudget(D));
    ASSERT_TRUE(c.exact);
    EXPECT_EQ(*c.exact, grid_ball(s, T, D).size());
    EXPECT_NEAR(c.ln_value, std::log(double(grid_ball(s, T, D).size())), 1e-12);
    EXPECT_EQ(*count_temporal(s, T, PerturbationBudget(D), DeltaSemantics::kExactly).exact,
              grid_ball(s, T, D, true).size());
  }
}

TEST(CountTemporal, ManyNeuronsSmallBudgetStaysExact) {
  std::vector<int> s(30000, 5);
  const SpaceCount c = count_temporal(s, 11, PerturbationBudget(2));
  ASSERT_TRUE(c.exact);
  const BigInt N = 30000;
  // 1 + 2N (mass 1) + 2N + 4 C(N, 2) (mass 2)
  EXPECT_EQ(*c.exact, 1 + 4 * N + 2 * N * (N - 1));
}

TEST(CountTemporal, LogDomainFallbackAgreesWithExact) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = static_cast<int>(rng.uniform_int(1, 8));
    const int T = static_cast<int>(rng.uniform_int(1, 9));
    const int D = static_cast<int>(rng.uniform_int(0, 6));
    std::vector<int> s(N);
    for (int& x : s) x = static_cast<int>(rng.uniform_int(0, T - 1));
    const SpaceCount exact = count_temporal(s, T, PerturbationBudget(D));
    const SpaceCount approx =
        count_temporal(s, T, PerturbationBudget(D), DeltaSemantics::kAtMost, -1.0);
    EXPECT_FALSE(approx.exact);
    EXPECT_NEAR(approx.ln_value, exact.ln_value, 1e-9 * std::max(1.0, exact.ln_value));
  }
}

TEST(CountRate, SmallCasesAndBruteForce) {
  EXPECT_EQ(*count_rate(1, 2, PerturbationBudget(1)).exact, 2);
  EXPECT_EQ(*count_rate(2, 3, PerturbationBudget(2)).exact, 21);
  EXPECT_EQ(*count_rate(5, 7, PerturbationBudget(0)).exact, 0);
  for (int N = 1; N <= 3; ++N)
    for (int T = 1; T <= 4; ++T)
      for (int D = 0; D <= 3; ++D)
        EXPECT_EQ(*count_rate(N, T, PerturbationBudget(D)).exact, brute_rate(N, T, D))
            << N << " " << T << " " << D;
}

TEST(CountRate, ClampsBudgetAboveBitCount) {
  const SpaceCount c = count_rate(1, 3, PerturbationBudget(10));
  EXPECT_TRUE(c.clamped);
  EXPECT_EQ(*c.exact, 7);  // 2^3 - 1
  EXPECT_FALSE(count_rate(1, 3, PerturbationBudget(3)).clamped);
}

TEST(CountRate, LargeCountsKeepLogAccuracy) {
  // N = 784, T = 256, delta = 3 still fits comfortably.
  const SpaceCount c = count_rate(784, 256, PerturbationBudget(3));
  ASSERT_TRUE(c.exact);
  const double M = 784.0 * 256.0;
  const double approx = std::log(M + M * (M - 1) / 2 + M * (M - 1) * (M - 2) / 6);
  EXPECT_NEAR(c.ln_value, approx, 1e-9 * approx);
  // Half of 2^(784*256) is far beyond 10^4 digits.
  const SpaceCount huge = count_rate(784, 256, PerturbationBudget(100000));
  EXPECT_FALSE(huge.exact);
  EXPECT_GT(huge.ln_value, 1e4 * std::log(10.0));
}

TEST(LogOf, AgreesWithDoubleLog) {
  EXPECT_NEAR(log_of(BigInt(1000)), std::log(1000.0), 1e-15);
  const BigInt big = BigInt(1) << 3000;
  EXPECT_NEAR(log_of(big), 3000 * std::log(2.0), 1e-9);
  EXPECT_TRUE(std::isinf(log_of(BigInt(0))));
}

TEST(UpperBound, DocumentedValues) {
  const TemporalBound b = temporal_upper_bound(2, PerturbationBudget(1));
  EXPECT_EQ(*b.partitions.exact, 2);
  EXPECT_NEAR(b.ln_bound, std::log(8.0), 1e-12);
  EXPECT_GE(b.ln_bound, std::log(5.0));

  const TemporalBound one = temporal_upper_bound(1, PerturbationBudget(0));
  EXPECT_NEAR(one.ln_bound, 0.0, 1e-15);

  const TemporalBound ten = temporal_upper_bound(10, PerturbationBudget(1));
  EXPECT_NEAR(ten.ln_bound, std::log(10.0 * std::pow(1.2, 10)), 1e-12);
  // Interior placements give the unclamped maximum 1 + 2N = 21.
  EXPECT_GE(ten.ln_bound, std::log(21.0));
}

TEST(UpperBound, DominatesExactCounts) {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const int N = static_cast<int>(rng.uniform_int(1, 6));
    const int T = static_cast<int>(rng.uniform_int(1, 6));
    const int D = static_cast<int>(rng.uniform_int(0, 4));
    std::vector<int> s(N);
    for (int& x : s) x = static_cast<int>(rng.uniform_int(0, T - 1));
    const double exact = count_temporal(s, T, PerturbationBudget(D)).ln_value;
    EXPECT_LE(exact, temporal_upper_bound(N, PerturbationBudget(D)).ln_bound + 1e-12);
  }
}

TEST(SpaceRatio, KnownValues) {
  EXPECT_NEAR(space_ratio(5, 10, PerturbationBudget(1)), std::log(5.0) - 10 * std::log(1.2), 1e-12);
  EXPECT_NEAR(space_ratio(5, 10, PerturbationBudget(1)), -0.2138, 1e-4);
  EXPECT_LT(space_ratio(5, 10, PerturbationBudget(1)), 0.0);
  for (int T : {1, 2, 9, 100}) EXPECT_EQ(space_ratio(T, 7, PerturbationBudget(0)), 0.0);
}

TEST(SpaceRatio, AlphaSlopeMatchesFiniteDifferences) {
  for (int T = 8; T <= 32; ++T)
    for (int N : {4, 16})
      for (double alpha = 0.05; alpha <= 0.5 + 1e-9; alpha += 0.05) {
        const double h = 1e-6;
        const auto f = [&](double a) { return log_space_ratio(T, N, a * T * N); };
        const double fd = (f(alpha + h) - f(alpha - h)) / (2 * h);
        EXPECT_GT(fd, 0.0);
        EXPECT_NEAR(fd, log_space_ratio_alpha_slope(T, N, alpha),
                    1e-5 * std::abs(log_space_ratio_alpha_slope(T, N, alpha)));
      }
}

TEST(SpaceRatio, GrowsWithTAtFixedAlpha) {
  for (int N : {4, 10, 16})
    for (double alpha : {0.05, 0.1, 0.25, 0.5}) {
      double prev = -1e300;
      for (int T = 8; T <= 32; ++T) {
        const double v = log_space_ratio(T, N, alpha * T * N);
        EXPECT_GE(v, prev);
        prev = v;
      }
    }
}

}  // namespace
}  // namespace snnv
