// Copyright 2026 The PRoBit Lab Authors
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

#include "probit/rng_stream.h"

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "probit/errors.h"

namespace probit {
namespace {

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(PhiloxTest, KnownAnswerZero) {
  const auto out = Philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (std::array<uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(PhiloxTest, KnownAnswerAllOnes) {
  const auto out = Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (std::array<uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(PhiloxTest, KnownAnswerPiDigits) {
  const auto out = Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (std::array<uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStreamTest, ReplaysBitIdentically) {
  RngStream a(42, 3, 7), b(42, 3, 7);
  for (int k = 0; k < 1000; ++k) ASSERT_EQ(a.NextU64(), b.NextU64());
  EXPECT_EQ(a.draw_counter(), 1000u);
}

TEST(RngStreamTest, DistinctKeysGiveDistinctStreams) {
  std::set<uint64_t> first_draws;
  for (uint64_t seed : {1u, 2u}) {
    for (uint32_t client = 0; client < 10; ++client) {
      for (uint32_t round = 0; round < 10; ++round) {
        first_draws.insert(RngStream(seed, client, round).NextU64());
      }
    }
  }
  EXPECT_EQ(first_draws.size(), 200u);
}

TEST(RngStreamTest, NeighbouringStreamsAreUncorrelated) {
  constexpr int kDraws = 100000;
  RngStream a(9, 0, 0), b(9, 1, 0), c(9, 0, 1);
  double ab = 0.0, ac = 0.0;
  for (int k = 0; k < kDraws; ++k) {
    const double x = a.Uniform() - 0.5;
    ab += x * (b.Uniform() - 0.5);
    ac += x * (c.Uniform() - 0.5);
  }
  // Correlation of independent uniforms has SE 1/sqrt(n); product variance is
  // 1/144 per draw.
  const double se = std::sqrt(kDraws / 144.0);
  EXPECT_LT(std::abs(ab), 4.0 * se);
  EXPECT_LT(std::abs(ac), 4.0 * se);
}

TEST(RngStreamTest, UniformMoments) {
  constexpr int kDraws = 200000;
  RngStream rng(5, 0, 0);
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < kDraws; ++k) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  EXPECT_NEAR(sum / kDraws, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / kDraws));
  EXPECT_NEAR(sum_sq / kDraws, 1.0 / 3.0, 0.005);
}

TEST(RngStreamTest, NormalMoments) {
  constexpr int kDraws = 200000;
  RngStream rng(6, 0, 0);
  double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
  for (int k = 0; k < kDraws; ++k) {
    const double z = rng.Normal();
    sum += z;
    sum_sq += z * z;
    sum_4 += z * z * z * z;
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 4.0 / std::sqrt(kDraws));
  EXPECT_NEAR(sum_sq / kDraws, 1.0, 4.0 * std::sqrt(2.0 / kDraws));
  EXPECT_NEAR(sum_4 / kDraws, 3.0, 0.1);
  EXPECT_EQ(rng.draw_counter(), 2u * kDraws);
}

TEST(RngStreamTest, UniformIntChiSquare) {
  constexpr int kBins = 7;
  constexpr int kDraws = 70000;
  RngStream rng(7, 0, 0);
  std::vector<int> counts(kBins, 0);
  for (int k = 0; k < kDraws; ++k) {
    const uint64_t x = rng.UniformInt(kBins);
    ASSERT_LT(x, static_cast<uint64_t>(kBins));
    ++counts[x];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(kDraws) / kBins;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9th percentile of chi-square with 6 degrees of freedom.
  EXPECT_LT(chi2, 22.46);
}

TEST(RngStreamTest, UniformIntRejectsZero) {
  RngStream rng(1, 0, 0);
  EXPECT_THROW(rng.UniformInt(0), PreconditionError);
}

TEST(RngStreamTest, DeriveSeedSeparatesPurposes) {
  EXPECT_NE(DeriveSeed(1, "compress"), DeriveSeed(1, "local"));
  EXPECT_NE(DeriveSeed(1, "compress"), DeriveSeed(2, "compress"));
  EXPECT_EQ(DeriveSeed(1, "compress"), DeriveSeed(1, "compress"));
}

}  // namespace
}  // namespace probit
