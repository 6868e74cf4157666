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

#include <vector>

#include <gtest/gtest.h>

#include "probit/errors.h"
#include "probit/rng_stream.h"

namespace probit {
namespace {

BitVector RandomBits(std::size_t d, uint64_t seed) {
  RngStream rng(seed, 0, 0);
  BitVector bits(d);
  for (std::size_t i = 0; i < d; ++i) bits.Set(i, rng.Bernoulli(0.5));
  return bits;
}

TEST(BitVectorTest, DefaultsToMinusOne) {
  const BitVector bits(5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(bits.Get(i), -1);
  EXPECT_EQ(bits.CountPlus(), 0u);
}

TEST(BitVectorTest, WireFormatIsLittleEndianLsbFirst) {
  const std::vector<int> signs = {1, -1, -1, 1, -1, -1, -1, -1, -1, 1};
  const BitVector bits = BitVector::FromSigns(signs);
  const std::vector<uint8_t> wire = bits.Serialize();
  // Header d = 10, then 0b00001001 and 0b00000010.
  EXPECT_EQ(wire, (std::vector<uint8_t>{10, 0, 0, 0, 0x09, 0x02}));
}

TEST(BitVectorTest, RoundTripsForAllSmallDimensions) {
  for (std::size_t d = 0; d <= 65; ++d) {
    const BitVector bits = RandomBits(d, d + 1);
    const BitVector back = BitVector::Deserialize(bits.Serialize());
    ASSERT_EQ(back, bits) << "d=" << d;
    ASSERT_EQ(bits.Serialize().size(), 4 + (d + 7) / 8);
  }
}

TEST(BitVectorTest, CountPlusMatchesLoop) {
  const BitVector bits = RandomBits(1001, 3);
  std::size_t count = 0;
  for (std::size_t i = 0; i < bits.dim(); ++i) count += bits.Get(i) == 1;
  EXPECT_EQ(bits.CountPlus(), count);
}

TEST(BitVectorTest, DeserializeRejectsMalformedInput) {
  const std::vector<uint8_t> truncated_header = {3, 0};
  EXPECT_THROW(BitVector::Deserialize(truncated_header), PreconditionError);
  const std::vector<uint8_t> short_payload = {9, 0, 0, 0, 0xff};
  EXPECT_THROW(BitVector::Deserialize(short_payload), PreconditionError);
  const std::vector<uint8_t> long_payload = {3, 0, 0, 0, 0x01, 0x00};
  EXPECT_THROW(BitVector::Deserialize(long_payload), PreconditionError);
  const std::vector<uint8_t> dirty_padding = {3, 0, 0, 0, 0x09};
  EXPECT_THROW(BitVector::Deserialize(dirty_padding), PreconditionError);
}

TEST(BitVectorTest, FromSignsRejectsOtherValues) {
  const std::vector<int> signs = {1, 0};
  EXPECT_THROW(BitVector::FromSigns(signs), PreconditionError);
}

}  // namespace
}  // namespace probit
