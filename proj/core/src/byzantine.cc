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

#include "probit/byzantine.h"

#include <array>
#include <cmath>
#include <utility>

#include "probit/errors.h"

namespace probit {
namespace {

constexpr std::array<std::pair<AttackKind, std::string_view>, 6> kAttackNames{{
    {AttackKind::kNone, "none"},
    {AttackKind::kGaussian, "gaussian"},
    {AttackKind::kSignFlip, "sign_flip"},
    {AttackKind::kZeroGradient, "zero_gradient"},
    {AttackKind::kSampleDuplicate, "sample_duplicate"},
    {AttackKind::kWorstCaseBits, "worst_case_bits"},
}};

std::size_t CheckedByzantineCount(const AttackSpec& spec, std::size_t m) {
  const std::size_t count = ByzantineCount(spec.beta, m);
  if (count >= m) {
    throw PreconditionError("Byzantine count " + std::to_string(count) +
                            " leaves no honest client among " +
                            std::to_string(m));
  }
  return count;
}

}  // namespace

std::string_view AttackKindName(AttackKind kind) {
  for (const auto& [k, name] : kAttackNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<AttackKind> ParseAttackKind(std::string_view name) {
  for (const auto& [k, n] : kAttackNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view WorstCaseModeName(WorstCaseMode mode) {
  return mode == WorstCaseMode::kAllPlus ? "all_plus" : "flip";
}

std::optional<WorstCaseMode> ParseWorstCaseMode(std::string_view name) {
  if (name == "all_plus") return WorstCaseMode::kAllPlus;
  if (name == "flip") return WorstCaseMode::kFlip;
  return std::nullopt;
}

void AttackSpec::Validate() const {
  if (!(beta >= 0.0 && beta < 0.5)) {
    throw ConfigError("attack: beta must lie in [0, 0.5)");
  }
  if (!(gaussian_variance >= 0.0) || !std::isfinite(gaussian_variance)) {
    throw ConfigError("attack: gaussian_variance must be finite and >= 0");
  }
  if (!std::isfinite(flip_factor)) {
    throw ConfigError("attack: flip_factor must be finite");
  }
}

std::size_t ByzantineCount(double beta, std::size_t num_clients) {
  // The epsilon absorbs products like 0.3 * 10 = 2.9999999999999996.
  return static_cast<std::size_t>(
      std::floor(beta * static_cast<double>(num_clients) + 1e-9));
}

std::vector<ModelVector> CorruptUpdates(const std::vector<ModelVector>& honest,
                                        const AttackSpec& spec,
                                        RngStream& rng) {
  const std::size_t m = honest.size();
  if (m == 0) throw PreconditionError("CorruptUpdates: no clients");
  for (const ModelVector& u : honest) CheckSameDim(u, honest.front(), "CorruptUpdates");
  const std::size_t num_byzantine = CheckedByzantineCount(spec, m);
  const std::size_t num_regular = m - num_byzantine;
  std::vector<ModelVector> out = honest;
  if (num_byzantine == 0 || spec.kind == AttackKind::kNone ||
      spec.kind == AttackKind::kWorstCaseBits) {
    return out;
  }
  const std::size_t d = honest.front().dim();
  const double stddev = std::sqrt(spec.gaussian_variance);

  ModelVector honest_sum(d);
  if (spec.kind == AttackKind::kZeroGradient) {
    auto sum = honest_sum.mutable_values();
    for (std::size_t k = 0; k < num_regular; ++k) {
      for (std::size_t i = 0; i < d; ++i) sum[i] += honest[k][i];
    }
  }

  for (std::size_t k = num_regular; k < m; ++k) {
    ModelVector& target = out[k];
    auto values = target.mutable_values();
    switch (spec.kind) {
      case AttackKind::kGaussian:
        for (double& v : values) v = stddev * rng.Normal();
        break;
      case AttackKind::kSignFlip:
        for (std::size_t i = 0; i < d; ++i) values[i] = spec.flip_factor * honest[k][i];
        break;
      case AttackKind::kZeroGradient:
        for (std::size_t i = 0; i < d; ++i) {
          values[i] = -honest_sum[i] / static_cast<double>(num_byzantine);
        }
        break;
      case AttackKind::kSampleDuplicate:
        target = honest.front();
        break;
      case AttackKind::kNone:
      case AttackKind::kWorstCaseBits:
        break;
    }
    target.CheckFinite();
  }
  return out;
}

std::vector<BitVector> CorruptBits(const std::vector<BitVector>& honest_bits,
                                   const AttackSpec& spec) {
  if (spec.kind != AttackKind::kWorstCaseBits) {
    throw PreconditionError("CorruptBits: attack kind must be worst_case_bits");
  }
  const std::size_t m = honest_bits.size();
  if (m == 0) throw PreconditionError("CorruptBits: no messages");
  const std::size_t num_byzantine = CheckedByzantineCount(spec, m);
  std::vector<BitVector> out = honest_bits;
  for (std::size_t k = m - num_byzantine; k < m; ++k) {
    BitVector& msg = out[k];
    for (std::size_t i = 0; i < msg.dim(); ++i) {
      msg.Set(i, spec.worst_case_mode == WorstCaseMode::kAllPlus
                     ? true
                     : !honest_bits[k].IsPlus(i));
    }
  }
  return out;
}

}  // namespace probit
