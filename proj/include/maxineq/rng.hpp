// Copyright 2026 The maxineq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <limits>

namespace maxineq {

// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: the same
// (counter, key) always yields the same 128 output bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// xoshiro256++ engine. Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(const std::array<std::uint64_t, 4>& state) : s_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  const std::array<std::uint64_t, 4>& state() const { return s_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_;
};

// Random stream owned by exactly one path (or one draw batch).
//
// The 256-bit engine state is derived from two Philox blocks whose key is the
// master seed and whose counter is (stream id, path index, block number), so
// every (seed, stream, index) triple names an independent substream and no
// stream depends on how many others were consumed before it.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t index);

  std::uint64_t bits() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    boost::random::normal_distribution<double> dist;
    return dist(engine_);
  }
  double gamma(double shape);  // unit scale
  std::uint64_t poisson(double mean);

  Xoshiro256pp& engine() { return engine_; }

 private:
  Xoshiro256pp engine_;
};

// Stream identifiers keep the draws of different roles inside one check apart.
namespace streams {
inline constexpr std::uint64_t kPaths = 1;
inline constexpr std::uint64_t kPilot = 2;
inline constexpr std::uint64_t kPairA = 3;
inline constexpr std::uint64_t kPairB = 4;
inline constexpr std::uint64_t kHitting = 5;
inline constexpr std::uint64_t kStartPlus = 16;
inline constexpr std::uint64_t kStartMinus = 64;
}  // namespace streams

}  // namespace maxineq
