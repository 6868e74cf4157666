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

#ifndef PROBIT_RNG_STREAM_H_
#define PROBIT_RNG_STREAM_H_

#include <array>
#include <cstdint>
#include <string_view>

namespace probit {

// Philox4x32-10 block function (Salmon et al., SC'11). Exposed for
// known-answer tests.
std::array<uint32_t, 4> Philox4x32(std::array<uint32_t, 4> counter,
                                   std::array<uint32_t, 2> key);

// Derives an independent 64-bit seed for a named purpose ("compress",
// "local", ...) from an experiment seed.
uint64_t DeriveSeed(uint64_t seed, std::string_view purpose);

// Counter-based random stream keyed on (seed, client, round). The output is a
// pure function of those three values and the number of draws made so far,
// so any stream can be replayed from scratch on any thread.
class RngStream {
 public:
  using result_type = uint64_t;

  RngStream(uint64_t seed, uint32_t client, uint32_t round);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return NextU64(); }

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Standard normal via Box-Muller; consumes exactly two draws.
  double Normal();
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }

  uint64_t seed() const { return seed_; }
  uint32_t client() const { return client_; }
  uint32_t round() const { return round_; }
  // Number of 64-bit draws consumed.
  uint64_t draw_counter() const { return draws_; }

 private:
  uint64_t seed_;
  uint32_t client_;
  uint32_t round_;
  uint64_t draws_ = 0;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buffer_{};
};

}  // namespace probit

#endif  // PROBIT_RNG_STREAM_H_
