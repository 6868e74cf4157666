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

#ifndef PROBIT_LEARNER_H_
#define PROBIT_LEARNER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "probit/dataset.h"
#include "probit/model_vector.h"
#include "probit/rng_stream.h"

namespace probit {

enum class LearnerKind { kLogistic, kMlp };

std::string_view LearnerKindName(LearnerKind kind);
std::optional<LearnerKind> ParseLearnerKind(std::string_view name);

// Architecture of a small softmax classifier. Parameters are flattened as
//   logistic: W[C][p], b[C]
//   mlp:      W1[H][p], b1[H], W2[C][H], b2[C]   (tanh hidden layer)
struct LearnerShape {
  LearnerKind kind = LearnerKind::kLogistic;
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  int classes = 0;

  std::size_t NumParams() const;
};

struct Learner {
  LearnerShape shape;
  ModelVector params;
};

// Zeros for logistic regression; Glorot-uniform weights and zero biases for
// the MLP.
ModelVector InitParams(const LearnerShape& shape, RngStream& rng);

struct LossGrad {
  double loss = 0.0;
  ModelVector grad;
};

// Mean cross-entropy over the batch and its exact gradient.
LossGrad LossAndGrad(const LearnerShape& shape, const ModelVector& params,
                     const Dataset& data, std::span<const std::size_t> batch);
// Same over the whole dataset.
LossGrad FullLossAndGrad(const LearnerShape& shape, const ModelVector& params,
                         const Dataset& data);
double Loss(const LearnerShape& shape, const ModelVector& params,
            const Dataset& data);
double Accuracy(const LearnerShape& shape, const ModelVector& params,
                const Dataset& data);

// B(w) = sqrt(mean ||g_m||^2 / ||mean g_m||^2) over client gradients taken at
// a common point. Returns +infinity when the mean gradient norm is below
// 1e-12.
double MeasureDissimilarity(std::span<const ModelVector> grads);

}  // namespace probit

#endif  // PROBIT_LEARNER_H_
