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

#ifndef PROBIT_DATASET_H_
#define PROBIT_DATASET_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "probit/rng_stream.h"

namespace probit {

// Labelled samples with dense features, stored row-major.
struct Dataset {
  std::size_t num_features = 0;
  int num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * num_features, num_features};
  }
  // Throws PreconditionError if a label is out of range or shapes disagree.
  void Validate() const;
};

Dataset Subset(const Dataset& data, std::span<const std::size_t> indices);

// Class-conditional Gaussian blobs: class c has unit-variance isotropic noise
// around centers[c], a random unit direction scaled by the spread.
struct SyntheticTask {
  int num_classes = 0;
  std::size_t num_features = 0;
  std::vector<double> centers;  // num_classes x num_features
};

SyntheticTask MakeSyntheticTask(int num_classes, std::size_t num_features,
                                double spread, RngStream& rng);
Dataset SampleSynthetic(const SyntheticTask& task, std::size_t per_class,
                        RngStream& rng);
// MakeSyntheticTask followed by SampleSynthetic on the same stream.
Dataset SynthGenerate(int num_classes, std::size_t per_class,
                      std::size_t num_features, double spread, RngStream& rng);

// Splits the data over num_clients clients so that each client holds samples
// from at most classes_per_client labels, every sample goes to exactly one
// client, and client sizes differ by at most one whenever the label choices
// allow it. Label choices favour the least-used classes so every class has a
// holder. Throws ConfigError if num_clients * classes_per_client < number of
// classes present, or classes_per_client exceeds the class count.
std::vector<Dataset> PartitionLabelSkew(const Dataset& data,
                                        std::size_t num_clients,
                                        int classes_per_client,
                                        RngStream& rng);

// Reads "f0,...,f{p-1},label" CSV with a header row. num_classes <= 0 infers
// the class count from the largest label. Throws ConfigError with the
// offending line number on malformed input.
Dataset LoadDatasetCsv(std::istream& in, int num_classes = 0);
Dataset LoadDatasetCsvFile(const std::string& path, int num_classes = 0);

}  // namespace probit

#endif  // PROBIT_DATASET_H_
