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

#include "probit/verify.h"

#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "probit/errors.h"

namespace probit {
namespace {

constexpr uint64_t kSeed = 4242;

TEST(SampleHonestUpdateTest, StaysInRangeAndCollapsesAtBoundary) {
  const std::vector<double> b = {1.0, 1.0, 1.0};
  const ModelVector theta({1.0, -0.95, 0.0});
  RngStream rng(1, 0, 0);
  for (int k = 0; k < 1000; ++k) {
    const ModelVector d = SampleHonestUpdate(theta, b, {}, rng);
    EXPECT_EQ(d[0], 1.0);
    EXPECT_LE(std::abs(d[1]), 1.0);
    EXPECT_LE(std::abs(d[2]), 1.0);
  }
}

TEST(CheckUnbiasednessTest, ZeroAndBoundaryMeans) {
  const std::vector<double> b(4, 0.01);
  const OracleReport zero = CheckUnbiasedness(ModelVector(4), b, 20, 2000, kSeed);
  EXPECT_TRUE(zero.pass) << zero.measured;
  const OracleReport edge =
      CheckUnbiasedness(ModelVector::Filled(4, 0.01), b, 20, 200, kSeed);
  EXPECT_TRUE(edge.pass);
  EXPECT_EQ(edge.measured, 0.0);
}

TEST(CheckUnbiasednessTest, ThirtyPercentOfRange) {
  const std::vector<double> b(10, 0.01);
  const OracleReport r =
      CheckUnbiasedness(ModelVector::Filled(10, 0.003), b, 50, 20000, kSeed);
  EXPECT_TRUE(r.pass) << r.measured;
  EXPECT_EQ(r.trials, 20000u);
}

TEST(CheckUnbiasednessTest, RejectsThetaOutsideRange) {
  const std::vector<double> b(1, 0.01);
  EXPECT_THROW(CheckUnbiasedness(ModelVector(std::vector<double>{0.02}), b, 5, 10, kSeed),
               PreconditionError);
}

TEST(CheckVarianceTest, TheoreticalValues) {
  const std::vector<double> one = {1.0};
  const OracleReport r = CheckVariance(ModelVector(1), one, 100, 20000, kSeed);
  EXPECT_DOUBLE_EQ(r.theoretical, 0.01);
  EXPECT_TRUE(r.pass) << r.measured;
  const OracleReport edge = CheckVariance(ModelVector::Filled(1, 1.0), one, 10, 100, kSeed);
  EXPECT_EQ(edge.theoretical, 0.0);
  EXPECT_EQ(edge.measured, 0.0);
  EXPECT_TRUE(edge.pass);
}

TEST(CheckVarianceTest, HalvesWhenClientsDouble) {
  const std::vector<double> b(10, 0.01);
  ModelVector theta(10);
  for (std::size_t i = 0; i < 10; ++i) theta.Set(i, 0.01 * (-0.9 + 0.2 * i));
  const OracleReport m10 = CheckVariance(theta, b, 10, 20000, kSeed);
  const OracleReport m20 = CheckVariance(theta, b, 20, 20000, kSeed + 1);
  EXPECT_NEAR(m10.measured / m20.measured, 2.0, 0.1);
}

TEST(CheckByzantineBoundTest, NoAdversaryNoDeviation) {
  const std::vector<double> b(3, 0.01);
  AttackSpec spec;
  spec.kind = AttackKind::kSignFlip;
  spec.beta = 0.0;
  const OracleReport r = CheckByzantineBound(spec, ModelVector(3), b, 10, 100, kSeed);
  EXPECT_EQ(r.measured, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(CheckByzantineBoundTest, BoundFormula) {
  const std::vector<double> b = {0.06, 0.08};  // ||b|| = 0.1
  AttackSpec spec;
  spec.kind = AttackKind::kGaussian;
  spec.beta = 0.1;
  const OracleReport r = CheckByzantineBound(spec, ModelVector(2), b, 20, 500, kSeed);
  EXPECT_NEAR(r.theoretical, 0.02, 1e-15);
  EXPECT_TRUE(r.pass);
}

TEST(CheckByzantineBoundTest, AllAttacksWithinBound) {
  const std::vector<double> b(5, 0.01);
  const ModelVector theta({-0.008, -0.004, 0.0, 0.004, 0.008});
  for (AttackKind kind : {AttackKind::kGaussian, AttackKind::kSignFlip,
                          AttackKind::kZeroGradient, AttackKind::kSampleDuplicate,
                          AttackKind::kWorstCaseBits}) {
    AttackSpec spec;
    spec.kind = kind;
    spec.beta = 0.3;
    const OracleReport r = CheckByzantineBound(spec, theta, b, 20, 2000, kSeed);
    EXPECT_TRUE(r.pass) << r.check << " " << r.measured << " > " << r.theoretical;
  }
}

TEST(CheckByzantineTightnessTest, ClosedFormAttained) {
  const OracleReport r = CheckByzantineTightness(0.25, 0.01, 4, 100, kSeed);
  EXPECT_DOUBLE_EQ(r.measured, 2.0 * 0.25 * 0.01);
  EXPECT_TRUE(r.pass);
}

TEST(CheckDpTest, CalibratedPassesAndZeroMarginFails) {
  PrivacySpec spec{0.1, 0.0002, true};
  const OracleReport ok = CheckDp(MarginPolicy::kCalibrated, spec, 0.005, 10, 2000, kSeed);
  EXPECT_TRUE(ok.pass) << ok.measured;
  EXPECT_LE(ok.measured, 0.1);
  const OracleReport bad = CheckDp(MarginPolicy::kNone, spec, 0.005, 10, 2000, kSeed);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.measured, 0.1);
}

TEST(CheckErrorDecayTest, SlopeNearMinusOne) {
  const std::vector<double> b(4, 1.0);
  const std::vector<std::size_t> counts = {10, 20, 40, 80};
  const OracleReport r = CheckErrorDecay(ModelVector(4), b, counts, 5000, kSeed);
  EXPECT_TRUE(r.pass) << r.measured;
  EXPECT_NEAR(r.measured, -1.0, 0.15);
}

TEST(CheckErrorDecayTest, DegenerateInputs) {
  const std::vector<double> b(2, 1.0);
  const std::vector<std::size_t> single = {10};
  EXPECT_THROW(CheckErrorDecay(ModelVector(2), b, single, 10, kSeed), PreconditionError);
  const std::vector<std::size_t> unsorted = {20, 10, 40};
  EXPECT_THROW(CheckErrorDecay(ModelVector(2), b, unsorted, 10, kSeed), PreconditionError);
  const std::vector<std::size_t> counts = {10, 20, 40};
  const OracleReport r = CheckErrorDecay(ModelVector::Filled(2, 1.0), b, counts, 10, kSeed);
  EXPECT_TRUE(r.pass);
  EXPECT_NE(r.note.find("degenerate"), std::string::npos);
}

TEST(RunSuiteTest, NamesAndReportFormat) {
  EXPECT_TRUE(IsKnownSuite("all"));
  EXPECT_FALSE(IsKnownSuite("everything"));
  EXPECT_THROW(RunSuite("everything", {}), PreconditionError);
  SuiteOptions options;
  options.trials = 200;
  const auto reports = RunSuite("dp", options);
  ASSERT_EQ(reports.size(), 2u);
  std::ostringstream out;
  WriteReportHeader(out);
  for (const auto& r : reports) WriteReportRow(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "check,measured,theoretical,tolerance,pass,trials,note");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("dp_calibration,", 0), 0u) << line;
}

TEST(RunSuiteTest, SeededReportsAreReproducible) {
  SuiteOptions options;
  options.trials = 300;
  const auto a = RunSuite("variance", options);
  const auto b = RunSuite("variance", options);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].measured, b[k].measured);
}

}  // namespace
}  // namespace probit
