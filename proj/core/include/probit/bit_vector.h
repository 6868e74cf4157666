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

#ifndef PROBIT_BIT_VECTOR_H_
#define PROBIT_BIT_VECTOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace probit {

// A d-dimensional vector of {+1, -1} entries packed one bit per coordinate.
//
// Wire format: a 4-byte little-endian unsigned dimension header followed by
// ceil(d / 8) payload bytes. Coordinate i lives in payload byte i / 8 at bit
// position i % 8 (LSB first); +1 is encoded as 1, -1 as 0. Unused trailing
// bits of the last byte are zero.
class BitVector {
 public:
  BitVector() = default;
  // All entries -1.
  explicit BitVector(std::size_t d);

  static BitVector FromSigns(std::span<const int> signs);

  std::size_t dim() const { return dim_; }
  // Returns +1 or -1.
  int Get(std::size_t i) const {
    return (bytes_[i >> 3] >> (i & 7)) & 1 ? 1 : -1;
  }
  bool IsPlus(std::size_t i) const { return (bytes_[i >> 3] >> (i & 7)) & 1; }
  void Set(std::size_t i, bool plus);

  std::span<const uint8_t> packed() const { return bytes_; }
  std::size_t CountPlus() const;

  std::vector<uint8_t> Serialize() const;
  // Throws PreconditionError on a truncated buffer, a length that disagrees
  // with the header, or nonzero padding bits.
  static BitVector Deserialize(std::span<const uint8_t> wire);

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<uint8_t> bytes_;
};

}  // namespace probit

#endif  // PROBIT_BIT_VECTOR_H_
