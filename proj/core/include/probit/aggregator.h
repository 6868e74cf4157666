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

#ifndef PROBIT_AGGREGATOR_H_
#define PROBIT_AGGREGATOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "probit/bit_vector.h"
#include "probit/model_vector.h"

namespace probit {

// Per-coordinate count of +1 bits over m received messages.
struct BitTally {
  std::vector<uint32_t> n_plus;
  uint32_t m = 0;

  std::size_t dim() const { return n_plus.size(); }
  double PlusFraction(std::size_t i) const {
    return static_cast<double>(n_plus[i]) / m;
  }
};

// The server's record of one aggregation round.
struct RoundReceipt {
  int round = 0;
  // Empty for full-precision schemes.
  BitTally tally;
  ModelVector theta_hat;
  // Quantization range (or server step) applied this round.
  std::vector<double> b_used;
};

// Throws PreconditionError on an empty list or mixed dimensions.
BitTally TallyBits(std::span<const BitVector> messages);

// Maximum-likelihood estimate of the mean update from a bit tally:
// theta_i = ((2 N_i - m) / m) * b_i.
ModelVector ProbitAggregate(const BitTally& tally, std::span<const double> b);

ModelVector FedAvgMean(std::span<const ModelVector> updates);

struct WeiszfeldOptions {
  // Stop once an iterate moves less than this (Euclidean).
  double tol = 1e-6;
  int max_iter = 100;
  // An iterate this close to a data point is nudged off it.
  double singularity_eps = 1e-12;
};

// Geometric median by Weiszfeld iteration from the coordinate-wise mean.
// Returns the last iterate if max_iter is reached.
ModelVector GeometricMedian(std::span<const ModelVector> updates,
                            const WeiszfeldOptions& options = {});

// step * sign(2 N_i - m) per coordinate; ties give 0.
ModelVector MajorityVote(std::span<const BitVector> messages, double step);

// coef * sum of the received +-1 bits per coordinate.
ModelVector SignAccumulate(std::span<const BitVector> messages, double coef);

// Deterministic sign encoding used by the sign-based baselines; 0 maps to +1.
BitVector SignBits(const ModelVector& v);

}  // namespace probit

#endif  // PROBIT_AGGREGATOR_H_
