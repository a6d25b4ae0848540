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

#include <cmath>
#include <set>

#include "doctest.h"
#include "maxineq/rng.hpp"
#include "maxineq/stats.hpp"

using namespace maxineq;

TEST_CASE("philox4x32-10 known answers") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Rng a(1, 2, 3), b(1, 2, 3);
  for (int i = 0; i < 16; ++i) CHECK(a.bits() == b.bits());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t i = 0; i < 64; ++i) firsts.insert(Rng(7, s, i).bits());
  CHECK(firsts.size() == 256);
  CHECK(Rng(7, 0, 0).bits() != Rng(8, 0, 0).bits());
}

TEST_CASE("uniform stays inside the open interval") {
  Rng r(3, 1, 0);
  Accumulator acc;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    acc.add(u);
  }
  CHECK(std::abs(acc.mean() - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST_CASE("gamma and poisson draws match their first two moments") {
  for (double shape : {0.3, 1.0, 4.5}) {
    Rng r(11, 1, static_cast<std::uint64_t>(shape * 10));
    Accumulator acc;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc.add(r.gamma(shape));
    CHECK(std::abs(acc.mean() - shape) < 4.0 * std::sqrt(shape / n));
    CHECK(acc.variance() == doctest::Approx(shape).epsilon(0.05));
  }
  for (double mean : {0.2, 3.0, 40.0}) {
    Rng r(12, 1, static_cast<std::uint64_t>(mean * 10));
    Accumulator acc;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc.add(static_cast<double>(r.poisson(mean)));
    CHECK(std::abs(acc.mean() - mean) < 4.0 * std::sqrt(mean / n));
  }
}
