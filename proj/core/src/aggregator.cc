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

#include "probit/aggregator.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "probit/errors.h"

namespace probit {
namespace {

void CheckMessages(std::span<const BitVector> messages, const char* context) {
  if (messages.empty()) {
    throw PreconditionError(std::string(context) + ": no messages");
  }
  for (const BitVector& msg : messages) {
    if (msg.dim() != messages.front().dim()) {
      throw PreconditionError(std::string(context) +
                              ": messages have mixed dimensions");
    }
  }
}

void CheckUpdates(std::span<const ModelVector> updates, const char* context) {
  if (updates.empty()) {
    throw PreconditionError(std::string(context) + ": no updates");
  }
  for (const ModelVector& u : updates) {
    CheckSameDim(u, updates.front(), context);
  }
}

}  // namespace

BitTally TallyBits(std::span<const BitVector> messages) {
  CheckMessages(messages, "TallyBits");
  const std::size_t d = messages.front().dim();
  BitTally tally;
  tally.n_plus.assign(d, 0);
  tally.m = static_cast<uint32_t>(messages.size());
  for (const BitVector& msg : messages) {
    const auto packed = msg.packed();
    for (std::size_t byte = 0; byte < packed.size(); ++byte) {
      uint8_t bits = packed[byte];
      while (bits != 0) {
        const int bit = __builtin_ctz(bits);
        ++tally.n_plus[byte * 8 + bit];
        bits &= static_cast<uint8_t>(bits - 1);
      }
    }
  }
  return tally;
}

ModelVector ProbitAggregate(const BitTally& tally, std::span<const double> b) {
  if (tally.m == 0) throw PreconditionError("ProbitAggregate: m = 0");
  if (b.size() != tally.dim()) {
    throw PreconditionError("ProbitAggregate: b has the wrong dimension");
  }
  ModelVector theta(tally.dim());
  auto out = theta.mutable_values();
  const double m = tally.m;
  for (std::size_t i = 0; i < tally.dim(); ++i) {
    out[i] = (2.0 * tally.n_plus[i] - m) / m * b[i];
  }
  return theta;
}

ModelVector FedAvgMean(std::span<const ModelVector> updates) {
  CheckUpdates(updates, "FedAvgMean");
  ModelVector mean(updates.front().dim());
  auto out = mean.mutable_values();
  for (const ModelVector& u : updates) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += u[i];
  }
  const double count = static_cast<double>(updates.size());
  for (double& v : out) v /= count;
  return mean;
}

ModelVector GeometricMedian(std::span<const ModelVector> updates,
                            const WeiszfeldOptions& options) {
  CheckUpdates(updates, "GeometricMedian");
  const std::size_t d = updates.front().dim();
  ModelVector current = FedAvgMean(updates);
  std::vector<double> next(d);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    for (const ModelVector& u : updates) {
      if (std::sqrt(SquaredL2Distance(current, u)) < options.singularity_eps) {
        auto values = current.mutable_values();
        for (double& v : values) v += options.singularity_eps;
        break;
      }
    }
    std::fill(next.begin(), next.end(), 0.0);
    double weight_sum = 0.0;
    for (const ModelVector& u : updates) {
      const double dist = std::sqrt(SquaredL2Distance(current, u));
      const double w = 1.0 / std::max(dist, options.singularity_eps);
      weight_sum += w;
      for (std::size_t i = 0; i < d; ++i) next[i] += w * u[i];
    }
    double moved = 0.0;
    auto values = current.mutable_values();
    for (std::size_t i = 0; i < d; ++i) {
      const double updated = next[i] / weight_sum;
      moved += (updated - values[i]) * (updated - values[i]);
      values[i] = updated;
    }
    if (std::sqrt(moved) < options.tol) break;
  }
  return current;
}

ModelVector MajorityVote(std::span<const BitVector> messages, double step) {
  const BitTally tally = TallyBits(messages);
  ModelVector out(tally.dim());
  auto values = out.mutable_values();
  for (std::size_t i = 0; i < tally.dim(); ++i) {
    const int64_t margin = 2 * static_cast<int64_t>(tally.n_plus[i]) - tally.m;
    values[i] = margin > 0 ? step : (margin < 0 ? -step : 0.0);
  }
  return out;
}

ModelVector SignAccumulate(std::span<const BitVector> messages, double coef) {
  const BitTally tally = TallyBits(messages);
  ModelVector out(tally.dim());
  auto values = out.mutable_values();
  for (std::size_t i = 0; i < tally.dim(); ++i) {
    values[i] =
        coef * static_cast<double>(2 * static_cast<int64_t>(tally.n_plus[i]) -
                                   tally.m);
  }
  return out;
}

BitVector SignBits(const ModelVector& v) {
  BitVector bits(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) bits.Set(i, v[i] >= 0.0);
  return bits;
}

}  // namespace probit
