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

#include "probit/learner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "probit/errors.h"

namespace probit {
namespace {

// Replaces logits with softmax probabilities; returns -log p[label].
double SoftmaxCrossEntropy(std::span<double> logits, int label) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  const double shifted_label = logits[label] - peak;
  double total = 0.0;
  for (double& z : logits) {
    z = std::exp(z - peak);
    total += z;
  }
  for (double& z : logits) z /= total;
  return std::log(total) - shifted_label;
}

void CheckShape(const LearnerShape& shape, const ModelVector& params,
                const Dataset& data) {
  if (params.dim() != shape.NumParams()) {
    throw PreconditionError("learner: parameter vector has the wrong dimension");
  }
  if (data.num_features != shape.inputs || data.num_classes != shape.classes) {
    throw PreconditionError("learner: dataset shape does not match the model");
  }
}

// Forward pass for one sample; fills logits (size C) and, for the MLP, the
// hidden activations (size H).
void Forward(const LearnerShape& shape, std::span<const double> w,
             std::span<const double> x, std::span<double> hidden,
             std::span<double> logits) {
  const std::size_t p = shape.inputs;
  const std::size_t c = static_cast<std::size_t>(shape.classes);
  if (shape.kind == LearnerKind::kLogistic) {
    const double* weights = w.data();
    const double* bias = weights + c * p;
    for (std::size_t k = 0; k < c; ++k) {
      double z = bias[k];
      for (std::size_t j = 0; j < p; ++j) z += weights[k * p + j] * x[j];
      logits[k] = z;
    }
    return;
  }
  const std::size_t h = shape.hidden;
  const double* w1 = w.data();
  const double* b1 = w1 + h * p;
  const double* w2 = b1 + h;
  const double* b2 = w2 + c * h;
  for (std::size_t u = 0; u < h; ++u) {
    double a = b1[u];
    for (std::size_t j = 0; j < p; ++j) a += w1[u * p + j] * x[j];
    hidden[u] = std::tanh(a);
  }
  for (std::size_t k = 0; k < c; ++k) {
    double z = b2[k];
    for (std::size_t u = 0; u < h; ++u) z += w2[k * h + u] * hidden[u];
    logits[k] = z;
  }
}

// Accumulates the gradient of one sample's loss; probs holds softmax output.
void Backward(const LearnerShape& shape, std::span<const double> w,
              std::span<const double> x, std::span<const double> hidden,
              std::span<const double> probs, int label, std::span<double> grad,
              std::span<double> hidden_grad) {
  const std::size_t p = shape.inputs;
  const std::size_t c = static_cast<std::size_t>(shape.classes);
  if (shape.kind == LearnerKind::kLogistic) {
    double* gw = grad.data();
    double* gb = gw + c * p;
    for (std::size_t k = 0; k < c; ++k) {
      const double dz = probs[k] - (static_cast<int>(k) == label ? 1.0 : 0.0);
      for (std::size_t j = 0; j < p; ++j) gw[k * p + j] += dz * x[j];
      gb[k] += dz;
    }
    return;
  }
  const std::size_t h = shape.hidden;
  const double* w2 = w.data() + h * p + h;
  double* gw1 = grad.data();
  double* gb1 = gw1 + h * p;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + c * h;
  std::fill(hidden_grad.begin(), hidden_grad.end(), 0.0);
  for (std::size_t k = 0; k < c; ++k) {
    const double dz = probs[k] - (static_cast<int>(k) == label ? 1.0 : 0.0);
    for (std::size_t u = 0; u < h; ++u) {
      gw2[k * h + u] += dz * hidden[u];
      hidden_grad[u] += w2[k * h + u] * dz;
    }
    gb2[k] += dz;
  }
  for (std::size_t u = 0; u < h; ++u) {
    const double da = hidden_grad[u] * (1.0 - hidden[u] * hidden[u]);
    for (std::size_t j = 0; j < p; ++j) gw1[u * p + j] += da * x[j];
    gb1[u] += da;
  }
}

}  // namespace

std::string_view LearnerKindName(LearnerKind kind) {
  return kind == LearnerKind::kLogistic ? "logistic" : "mlp";
}

std::optional<LearnerKind> ParseLearnerKind(std::string_view name) {
  if (name == "logistic") return LearnerKind::kLogistic;
  if (name == "mlp") return LearnerKind::kMlp;
  return std::nullopt;
}

std::size_t LearnerShape::NumParams() const {
  const std::size_t c = static_cast<std::size_t>(classes);
  if (kind == LearnerKind::kLogistic) return c * inputs + c;
  return hidden * inputs + hidden + c * hidden + c;
}

ModelVector InitParams(const LearnerShape& shape, RngStream& rng) {
  ModelVector params(shape.NumParams());
  if (shape.kind == LearnerKind::kLogistic) return params;
  const std::size_t p = shape.inputs;
  const std::size_t h = shape.hidden;
  const std::size_t c = static_cast<std::size_t>(shape.classes);
  auto w = params.mutable_values();
  const double limit1 = std::sqrt(6.0 / static_cast<double>(p + h));
  for (std::size_t i = 0; i < h * p; ++i) w[i] = limit1 * (2.0 * rng.Uniform() - 1.0);
  const double limit2 = std::sqrt(6.0 / static_cast<double>(h + c));
  double* w2 = w.data() + h * p + h;
  for (std::size_t i = 0; i < c * h; ++i) w2[i] = limit2 * (2.0 * rng.Uniform() - 1.0);
  return params;
}

LossGrad LossAndGrad(const LearnerShape& shape, const ModelVector& params,
                     const Dataset& data, std::span<const std::size_t> batch) {
  CheckShape(shape, params, data);
  if (batch.empty()) throw PreconditionError("LossAndGrad: empty batch");
  LossGrad out{0.0, ModelVector(params.dim())};
  std::vector<double> hidden(shape.hidden), hidden_grad(shape.hidden);
  std::vector<double> logits(static_cast<std::size_t>(shape.classes));
  auto grad = out.grad.mutable_values();
  for (std::size_t idx : batch) {
    if (idx >= data.size()) throw PreconditionError("LossAndGrad: batch index out of range");
    const auto x = data.row(idx);
    Forward(shape, params.values(), x, hidden, logits);
    out.loss += SoftmaxCrossEntropy(logits, data.labels[idx]);
    Backward(shape, params.values(), x, hidden, logits, data.labels[idx], grad,
             hidden_grad);
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  out.loss *= scale;
  for (double& g : grad) g *= scale;
  return out;
}

LossGrad FullLossAndGrad(const LearnerShape& shape, const ModelVector& params,
                         const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return LossAndGrad(shape, params, data, all);
}

double Loss(const LearnerShape& shape, const ModelVector& params,
            const Dataset& data) {
  CheckShape(shape, params, data);
  if (data.size() == 0) throw PreconditionError("Loss: empty dataset");
  std::vector<double> hidden(shape.hidden);
  std::vector<double> logits(static_cast<std::size_t>(shape.classes));
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Forward(shape, params.values(), data.row(i), hidden, logits);
    total += SoftmaxCrossEntropy(logits, data.labels[i]);
  }
  return total / static_cast<double>(data.size());
}

double Accuracy(const LearnerShape& shape, const ModelVector& params,
                const Dataset& data) {
  CheckShape(shape, params, data);
  if (data.size() == 0) throw PreconditionError("Accuracy: empty dataset");
  std::vector<double> hidden(shape.hidden);
  std::vector<double> logits(static_cast<std::size_t>(shape.classes));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Forward(shape, params.values(), data.row(i), hidden, logits);
    const auto best = std::max_element(logits.begin(), logits.end()) - logits.begin();
    if (best == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double MeasureDissimilarity(std::span<const ModelVector> grads) {
  if (grads.empty()) throw PreconditionError("MeasureDissimilarity: no gradients");
  const std::size_t d = grads.front().dim();
  std::vector<double> mean(d, 0.0);
  double mean_sq_norm = 0.0;
  for (const ModelVector& g : grads) {
    CheckSameDim(g, grads.front(), "MeasureDissimilarity");
    double sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      mean[i] += g[i];
      sq += g[i] * g[i];
    }
    mean_sq_norm += sq;
  }
  const double m = static_cast<double>(grads.size());
  mean_sq_norm /= m;
  double norm_of_mean_sq = 0.0;
  for (double v : mean) norm_of_mean_sq += (v / m) * (v / m);
  if (std::sqrt(norm_of_mean_sq) < 1e-12) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(mean_sq_norm / norm_of_mean_sq);
}

}  // namespace probit
