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

#include "probit/quantizer.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "probit/errors.h"

namespace probit {

QuantParams::QuantParams(std::vector<double> b, double dp_margin)
    : b_(std::move(b)), dp_margin_(dp_margin) {
  if (!(dp_margin_ >= 0.0) || !std::isfinite(dp_margin_)) {
    throw ConfigError("QuantParams: dp_margin must be finite and >= 0");
  }
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (!std::isfinite(b_[i]) || b_[i] <= 0.0) {
      throw ConfigError("QuantParams: b[" + std::to_string(i) +
                        "] must be finite and positive");
    }
    if (dp_margin_ >= b_[i]) {
      throw ConfigError("QuantParams: b[" + std::to_string(i) + "]=" +
                        std::to_string(b_[i]) +
                        " leaves no room beyond the privacy margin " +
                        std::to_string(dp_margin_) +
                        "; increase b or relax epsilon");
    }
  }
}

QuantParams QuantParams::Uniform(std::size_t d, double b, double dp_margin) {
  return QuantParams(std::vector<double>(d, b), dp_margin);
}

double QuantParams::MeanB() const {
  if (b_.empty()) return 0.0;
  double sum = 0.0;
  for (double v : b_) sum += v;
  return sum / static_cast<double>(b_.size());
}

ModelVector ClampUpdate(const ModelVector& delta, const QuantParams& q) {
  if (delta.dim() != q.dim()) {
    throw PreconditionError("ClampUpdate: dimension mismatch");
  }
  ModelVector out(delta);
  auto values = out.mutable_values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double limit = q.admissible(i);
    values[i] = std::clamp(values[i], -limit, limit);
  }
  return out;
}

double PlusProbability(double delta_i, double b_i) {
  return (b_i + delta_i) / (2.0 * b_i);
}

BitVector Compress(const ModelVector& delta, const QuantParams& q,
                   RngStream& rng) {
  if (delta.dim() != q.dim()) {
    throw PreconditionError("Compress: dimension mismatch");
  }
  BitVector bits(delta.dim());
  for (std::size_t i = 0; i < delta.dim(); ++i) {
    if (std::abs(delta[i]) > q.b(i)) {
      throw PreconditionError("Compress: |delta[" + std::to_string(i) +
                              "]| exceeds b; clamp the update first");
    }
    bits.Set(i, rng.Uniform() < PlusProbability(delta[i], q.b(i)));
  }
  return bits;
}

QuantParams DynamicBUpdate(const QuantParams& q, bool loss_decreased) {
  const double factor = loss_decreased ? kBGrowth : kBShrink;
  std::vector<double> b = q.b();
  for (double& v : b) v *= factor;
  return QuantParams(std::move(b), q.dp_margin());
}

double ExpectedValue(double delta_i, double b_i) {
  const double p_plus = PlusProbability(delta_i, b_i);
  return p_plus * b_i + (1.0 - p_plus) * (-b_i);
}

}  // namespace probit
