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

#include "probit/bit_vector.h"

#include <bit>
#include <limits>
#include <string>

#include "probit/errors.h"

namespace probit {
namespace {

constexpr std::size_t kHeaderBytes = 4;

std::size_t PayloadBytes(std::size_t d) { return (d + 7) / 8; }

}  // namespace

BitVector::BitVector(std::size_t d) : dim_(d), bytes_(PayloadBytes(d), 0) {}

BitVector BitVector::FromSigns(std::span<const int> signs) {
  BitVector out(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw PreconditionError("BitVector::FromSigns: entry " +
                              std::to_string(i) + " is not +1 or -1");
    }
    out.Set(i, signs[i] == 1);
  }
  return out;
}

void BitVector::Set(std::size_t i, bool plus) {
  const uint8_t mask = static_cast<uint8_t>(1u << (i & 7));
  if (plus) {
    bytes_[i >> 3] |= mask;
  } else {
    bytes_[i >> 3] &= static_cast<uint8_t>(~mask);
  }
}

std::size_t BitVector::CountPlus() const {
  std::size_t count = 0;
  for (uint8_t byte : bytes_) count += std::popcount(byte);
  return count;
}

std::vector<uint8_t> BitVector::Serialize() const {
  if (dim_ > std::numeric_limits<uint32_t>::max()) {
    throw PreconditionError("BitVector::Serialize: dimension exceeds 32 bits");
  }
  std::vector<uint8_t> wire;
  wire.reserve(kHeaderBytes + bytes_.size());
  const auto d = static_cast<uint32_t>(dim_);
  for (int shift = 0; shift < 32; shift += 8) {
    wire.push_back(static_cast<uint8_t>(d >> shift));
  }
  wire.insert(wire.end(), bytes_.begin(), bytes_.end());
  return wire;
}

BitVector BitVector::Deserialize(std::span<const uint8_t> wire) {
  if (wire.size() < kHeaderBytes) {
    throw PreconditionError("BitVector::Deserialize: truncated header");
  }
  uint32_t d = 0;
  for (std::size_t k = 0; k < kHeaderBytes; ++k) {
    d |= static_cast<uint32_t>(wire[k]) << (8 * k);
  }
  const std::size_t payload = wire.size() - kHeaderBytes;
  if (payload != PayloadBytes(d)) {
    throw PreconditionError("BitVector::Deserialize: header says d=" +
                            std::to_string(d) + " but payload has " +
                            std::to_string(payload) + " bytes");
  }
  BitVector out(d);
  for (std::size_t k = 0; k < payload; ++k) out.bytes_[k] = wire[kHeaderBytes + k];
  if (d % 8 != 0 && (out.bytes_.back() >> (d % 8)) != 0) {
    throw PreconditionError("BitVector::Deserialize: nonzero padding bits");
  }
  return out;
}

}  // namespace probit
