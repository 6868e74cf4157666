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

#include "probit/rng_stream.h"

#include <cmath>
#include <numbers>

#include "probit/errors.h"

namespace probit {
namespace {

constexpr uint32_t kMul0 = 0xD2511F53;
constexpr uint32_t kMul1 = 0xCD9E8D57;
constexpr uint32_t kWeyl0 = 0x9E3779B9;
constexpr uint32_t kWeyl1 = 0xBB67AE85;

inline void MulHiLo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t product = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(product >> 32);
  lo = static_cast<uint32_t>(product);
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> ctr,
                                   std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMul0, ctr[0], hi0, lo0);
    MulHiLo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

uint64_t DeriveSeed(uint64_t seed, std::string_view purpose) {
  // FNV-1a over the purpose tag, then mixed with the seed.
  uint64_t tag = 0xCBF29CE484222325ULL;
  for (unsigned char ch : purpose) {
    tag ^= ch;
    tag *= 0x100000001B3ULL;
  }
  return SplitMix64(SplitMix64(seed) ^ tag);
}

RngStream::RngStream(uint64_t seed, uint32_t client, uint32_t round)
    : seed_(seed), client_(client), round_(round) {}

uint64_t RngStream::NextU64() {
  if (draws_ % 2 == 0) {
    block_ = draws_ / 2;
    buffer_ = Philox4x32(
        {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
         client_, round_},
        {static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)});
  }
  const std::size_t offset = (draws_ % 2) * 2;
  ++draws_;
  return (static_cast<uint64_t>(buffer_[offset]) << 32) | buffer_[offset + 1];
}

double RngStream::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RngStream::Normal() {
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t RngStream::UniformInt(uint64_t n) {
  if (n == 0) throw PreconditionError("RngStream::UniformInt: n must be > 0");
  // Rejection sampling removes modulo bias.
  const uint64_t limit = max() - max() % n;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return x % n;
}

}  // namespace probit
