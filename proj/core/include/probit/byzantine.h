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

#ifndef PROBIT_BYZANTINE_H_
#define PROBIT_BYZANTINE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "probit/bit_vector.h"
#include "probit/model_vector.h"
#include "probit/rng_stream.h"

namespace probit {

enum class AttackKind {
  kNone,
  kGaussian,
  kSignFlip,
  kZeroGradient,
  kSampleDuplicate,
  kWorstCaseBits,
};

std::string_view AttackKindName(AttackKind kind);
std::optional<AttackKind> ParseAttackKind(std::string_view name);

// How a worst-case bit adversary chooses its message.
enum class WorstCaseMode {
  kAllPlus,
  // Send the complement of the bits an honest client would have sent.
  kFlip,
};

std::string_view WorstCaseModeName(WorstCaseMode mode);
std::optional<WorstCaseMode> ParseWorstCaseMode(std::string_view name);

struct AttackSpec {
  AttackKind kind = AttackKind::kNone;
  // Fraction of Byzantine clients, in [0, 0.5).
  double beta = 0.0;
  double gaussian_variance = 100.0;
  double flip_factor = -5.0;
  WorstCaseMode worst_case_mode = WorstCaseMode::kAllPlus;
  // Byzantine clients report the opposite of their true loss trend in the
  // one-bit loss vote that drives the dynamic quantization range.
  bool lie_in_loss_vote = false;

  // Throws ConfigError on out-of-range parameters.
  void Validate() const;
};

// floor(beta * M). Byzantine clients are always the last ones by id.
std::size_t ByzantineCount(double beta, std::size_t num_clients);

// Replaces the updates of the last ByzantineCount(beta, M) clients according
// to the attack kind; the first R entries are returned untouched. Byzantine
// clients are omniscient: they see every honest update. kWorstCaseBits leaves
// updates untouched (it acts on the wire, see CorruptBits).
std::vector<ModelVector> CorruptUpdates(const std::vector<ModelVector>& honest,
                                        const AttackSpec& spec,
                                        RngStream& rng);

// Replaces the last ByzantineCount messages with the worst-case bit pattern.
// Throws PreconditionError unless spec.kind is kWorstCaseBits.
std::vector<BitVector> CorruptBits(const std::vector<BitVector>& honest_bits,
                                   const AttackSpec& spec);

}  // namespace probit

#endif  // PROBIT_BYZANTINE_H_
