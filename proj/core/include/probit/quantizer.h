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

#ifndef PROBIT_QUANTIZER_H_
#define PROBIT_QUANTIZER_H_

#include <cstddef>
#include <vector>

#include "probit/bit_vector.h"
#include "probit/model_vector.h"
#include "probit/rng_stream.h"

namespace probit {

// Per-coordinate quantization range b of the stochastic one-bit compressor,
// plus the privacy margin (1 + 1/eps) * Delta_1 that must stay unused by the
// update magnitude (zero when privacy is off).
class QuantParams {
 public:
  QuantParams() = default;
  // Throws ConfigError unless every b_i > dp_margin >= 0.
  QuantParams(std::vector<double> b, double dp_margin = 0.0);
  static QuantParams Uniform(std::size_t d, double b, double dp_margin = 0.0);

  std::size_t dim() const { return b_.size(); }
  const std::vector<double>& b() const { return b_; }
  double b(std::size_t i) const { return b_[i]; }
  double dp_margin() const { return dp_margin_; }
  // Largest update magnitude that coordinate i may carry: b_i - dp_margin.
  double admissible(std::size_t i) const { return b_[i] - dp_margin_; }
  double MeanB() const;

 private:
  std::vector<double> b_;
  double dp_margin_ = 0.0;
};

// Clamps each delta_i into [-(b_i - margin), b_i - margin].
ModelVector ClampUpdate(const ModelVector& delta, const QuantParams& q);

// Stochastic binarizer: bit i is +1 with probability (b_i + delta_i) / (2 b_i)
// and -1 otherwise. Consumes exactly one draw per coordinate in ascending
// coordinate order. Throws PreconditionError if some |delta_i| > b_i.
BitVector Compress(const ModelVector& delta, const QuantParams& q,
                   RngStream& rng);

// Probability that the compressor emits +1 for a single coordinate.
double PlusProbability(double delta_i, double b_i);

// Multiplicative schedule for b: x1.01 after a round where the global loss
// went down, x0.98 otherwise.
inline constexpr double kBGrowth = 1.01;
inline constexpr double kBShrink = 0.98;
QuantParams DynamicBUpdate(const QuantParams& q, bool loss_decreased);

// Mean of the decoded message b_i * bit_i, which equals delta_i for every
// admissible input.
double ExpectedValue(double delta_i, double b_i);

}  // namespace probit

#endif  // PROBIT_QUANTIZER_H_
