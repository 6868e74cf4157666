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

#include "probit/model_vector.h"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "probit/errors.h"
#include "probit/rng_stream.h"

namespace probit {
namespace {

ModelVector RandomVector(std::size_t d, uint64_t seed) {
  RngStream rng(seed, 0, 0);
  std::vector<double> v(d);
  for (double& x : v) x = 10.0 * rng.Normal();
  return ModelVector(v);
}

TEST(ModelVectorTest, ZeroVectorHasZeroNorms) {
  EXPECT_EQ(L2Norm(ModelVector(3)), 0.0);
  EXPECT_EQ(L1Norm(ModelVector(2)), 0.0);
}

TEST(ModelVectorTest, PythagoreanPair) {
  EXPECT_DOUBLE_EQ(L2Norm(ModelVector({3.0, 4.0})), 5.0);
}

TEST(ModelVectorTest, L1OfMixedSigns) {
  EXPECT_DOUBLE_EQ(L1Norm(ModelVector({1.0, -2.0, 3.0})), 6.0);
}

TEST(ModelVectorTest, NormsMatchNaiveOracle) {
  for (std::size_t d : {1u, 100u, 10000u}) {
    const ModelVector v = RandomVector(d, d);
    long double sq = 0.0L, abs_sum = 0.0L;
    for (double x : v.values()) {
      sq += static_cast<long double>(x) * x;
      abs_sum += std::fabs(static_cast<long double>(x));
    }
    const double l2 = static_cast<double>(std::sqrt(sq));
    const double l1 = static_cast<double>(abs_sum);
    EXPECT_NEAR(L2Norm(v), l2, 1e-12 * l2) << "d=" << d;
    EXPECT_NEAR(L1Norm(v), l1, 1e-12 * l1) << "d=" << d;
  }
}

TEST(ModelVectorTest, SquaredDistance) {
  EXPECT_DOUBLE_EQ(SquaredL2Distance(ModelVector({1.0, 2.0}), ModelVector({4.0, 6.0})), 25.0);
}

TEST(ModelVectorTest, AxpyAddsUpdateToModel) {
  const ModelVector w({0.5, -1.0, 2.0});
  const ModelVector theta({0.01, 0.02, -0.03});
  const ModelVector next = Axpy(1.0, theta, w);
  EXPECT_DOUBLE_EQ(next[0], 0.51);
  EXPECT_DOUBLE_EQ(next[1], -0.98);
  EXPECT_DOUBLE_EQ(next[2], 1.97);
}

TEST(ModelVectorTest, AxpyWithZeroScaleIsIdentity) {
  const ModelVector y = RandomVector(7, 3);
  EXPECT_EQ(Axpy(0.0, RandomVector(7, 4), y), y);
}

TEST(ModelVectorTest, AxpyRecoversModelDifference) {
  const ModelVector w_t({1.0, 2.0});
  const ModelVector w_next({1.5, 1.0});
  const ModelVector delta = Axpy(-1.0, w_t, w_next);
  EXPECT_DOUBLE_EQ(delta[0], 0.5);
  EXPECT_DOUBLE_EQ(delta[1], -1.0);
}

TEST(ModelVectorTest, AxpyRejectsDimensionMismatch) {
  EXPECT_THROW(Axpy(1.0, ModelVector(2), ModelVector(3)), PreconditionError);
}

TEST(ModelVectorTest, RejectsNonFiniteEntries) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ModelVector(std::vector<double>{1.0, nan}), PreconditionError);
  EXPECT_THROW(ModelVector(std::vector<double>{inf}), PreconditionError);
  ModelVector v(2);
  EXPECT_THROW(v.Set(0, nan), PreconditionError);
  EXPECT_THROW(Axpy(1e308, ModelVector(std::vector<double>{1e308}), ModelVector(std::vector<double>{1e308})), PreconditionError);
}

TEST(ModelVectorTest, FilledAndEquality) {
  const ModelVector v = ModelVector::Filled(4, 0.25);
  EXPECT_EQ(v.dim(), 4u);
  EXPECT_EQ(v, ModelVector({0.25, 0.25, 0.25, 0.25}));
  EXPECT_NE(v, ModelVector(4));
}

}  // namespace
}  // namespace probit
