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

#include "probit/dataset.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "probit/errors.h"
#include "probit/learner.h"

namespace probit {
namespace {

// Dataset whose first feature is the sample index, so membership can be
// traced through a partition.
Dataset IndexedDataset(int classes, std::size_t per_class) {
  Dataset data;
  data.num_features = 2;
  data.num_classes = classes;
  for (int c = 0; c < classes; ++c) {
    for (std::size_t k = 0; k < per_class; ++k) {
      data.features.push_back(static_cast<double>(data.labels.size()));
      data.features.push_back(0.0);
      data.labels.push_back(c);
    }
  }
  return data;
}

void ExpectExactCover(const Dataset& data, const std::vector<Dataset>& parts) {
  std::vector<int> seen(data.size(), 0);
  std::size_t total = 0;
  for (const Dataset& part : parts) {
    total += part.size();
    for (std::size_t i = 0; i < part.size(); ++i) {
      const auto idx = static_cast<std::size_t>(part.row(i)[0]);
      ASSERT_LT(idx, data.size());
      ++seen[idx];
      EXPECT_EQ(part.labels[i], data.labels[idx]);
    }
  }
  EXPECT_EQ(total, data.size());
  for (int count : seen) EXPECT_EQ(count, 1);
}

std::set<int> LabelSet(const Dataset& d) { return {d.labels.begin(), d.labels.end()}; }

TEST(SynthGenerateTest, DeterministicGivenStream) {
  RngStream a(5, 0, 0), b(5, 0, 0);
  const Dataset x = SynthGenerate(4, 30, 16, 3.0, a);
  const Dataset y = SynthGenerate(4, 30, 16, 3.0, b);
  EXPECT_EQ(x.features, y.features);
  EXPECT_EQ(x.labels, y.labels);
  EXPECT_EQ(x.size(), 120u);
  EXPECT_NO_THROW(x.Validate());
}

TEST(SynthGenerateTest, ZeroSpreadMakesClassesIndistinguishable) {
  RngStream rng(6, 0, 0);
  const Dataset data = SynthGenerate(4, 500, 8, 0.0, rng);
  // Class means all sit at the origin.
  for (int c = 0; c < 4; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.labels[i] == c) sum += data.row(i)[0];
    }
    EXPECT_NEAR(sum / 500.0, 0.0, 4.0 / std::sqrt(500.0));
  }
}

TEST(SynthGenerateTest, WideSpreadIsSeparableByCentralizedTraining) {
  RngStream rng(7, 0, 0);
  const Dataset data = SynthGenerate(2, 200, 8, 10.0, rng);
  const LearnerShape shape{LearnerKind::kLogistic, 8, 0, 2};
  RngStream init(7, 1, 0);
  ModelVector w = InitParams(shape, init);
  for (int step = 0; step < 200; ++step) {
    w = Axpy(-0.5, FullLossAndGrad(shape, w, data).grad, w);
  }
  EXPECT_GE(Accuracy(shape, w, data), 0.99);
}

TEST(PartitionLabelSkewTest, OnePureClassPerClient) {
  const Dataset data = IndexedDataset(5, 40);
  RngStream rng(1, 0, 0);
  const auto parts = PartitionLabelSkew(data, 5, 1, rng);
  ASSERT_EQ(parts.size(), 5u);
  std::set<int> used;
  for (const Dataset& part : parts) {
    const auto labels = LabelSet(part);
    ASSERT_EQ(labels.size(), 1u);
    used.insert(*labels.begin());
    EXPECT_EQ(part.size(), 40u);
  }
  EXPECT_EQ(used.size(), 5u);
  ExpectExactCover(data, parts);
}

TEST(PartitionLabelSkewTest, AtMostTwoClassesPerClient) {
  const Dataset data = IndexedDataset(10, 57);
  for (uint32_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed, 0, 0);
    const auto parts = PartitionLabelSkew(data, 10, 2, rng);
    std::size_t lo = data.size(), hi = 0;
    for (const Dataset& part : parts) {
      EXPECT_LE(LabelSet(part).size(), 2u);
      lo = std::min(lo, part.size());
      hi = std::max(hi, part.size());
    }
    EXPECT_LE(hi - lo, 1u);
    ExpectExactCover(data, parts);
  }
}

TEST(PartitionLabelSkewTest, AllClassesGiveHomogeneousSplit) {
  const Dataset data = IndexedDataset(4, 100);
  RngStream rng(2, 0, 0);
  const auto parts = PartitionLabelSkew(data, 8, 4, rng);
  for (const Dataset& part : parts) {
    EXPECT_EQ(part.size(), 50u);
    EXPECT_EQ(LabelSet(part).size(), 4u);
  }
  ExpectExactCover(data, parts);
}

TEST(PartitionLabelSkewTest, DeskScaleConservation) {
  RngStream gen(3, 0, 0);
  Dataset data = SynthGenerate(4, 250, 16, 3.0, gen);
  for (std::size_t i = 0; i < data.size(); ++i) data.features[i * 16] = static_cast<double>(i);
  RngStream rng(3, 1, 0);
  const auto parts = PartitionLabelSkew(data, 50, 2, rng);
  for (const Dataset& part : parts) {
    EXPECT_EQ(part.size(), 20u);
    EXPECT_LE(LabelSet(part).size(), 2u);
  }
  ExpectExactCover(data, parts);
}

TEST(PartitionLabelSkewTest, RejectsImpossibleCoverage) {
  const Dataset data = IndexedDataset(10, 5);
  RngStream rng(1, 0, 0);
  EXPECT_THROW(PartitionLabelSkew(data, 3, 2, rng), ConfigError);
  EXPECT_THROW(PartitionLabelSkew(data, 20, 11, rng), ConfigError);
}

TEST(LoadDatasetCsvTest, ParsesWellFormedInput) {
  std::istringstream in("f0,f1,label\n0.5,1.5,1\n-2,3e-1,0\n");
  const Dataset data = LoadDatasetCsv(in);
  EXPECT_EQ(data.size(), 2u);
  EXPECT_EQ(data.num_features, 2u);
  EXPECT_EQ(data.num_classes, 2);
  EXPECT_EQ(data.features, (std::vector<double>{0.5, 1.5, -2.0, 0.3}));
  EXPECT_EQ(data.labels, (std::vector<int>{1, 0}));
}

TEST(LoadDatasetCsvTest, ReportsLineOfBadRow) {
  std::istringstream in("f0,label\n1.0,0\n2.0\n");
  try {
    LoadDatasetCsv(in);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LoadDatasetCsvTest, RejectsBadHeaderAndLabels) {
  std::istringstream header("x,y,label\n1,2,0\n");
  EXPECT_THROW(LoadDatasetCsv(header), ConfigError);
  std::istringstream label("f0,label\n1,5\n");
  EXPECT_THROW(LoadDatasetCsv(label, 3), ConfigError);
  std::istringstream negative("f0,label\n1,-1\n");
  EXPECT_THROW(LoadDatasetCsv(negative), ConfigError);
  std::istringstream empty("f0,label\n");
  EXPECT_THROW(LoadDatasetCsv(empty), ConfigError);
}

}  // namespace
}  // namespace probit
