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

#include "doctest.h"
#include "maxineq/moderate.hpp"
#include "oracle_values.hpp"

using namespace maxineq;

TEST_CASE("descriptor parsing") {
  const auto f = ModerateFunction::parse("pow:2");
  CHECK(f.descriptor() == "pow:2");
  CHECK(f(3.0) == doctest::Approx(9.0));
  const auto g = ModerateFunction::parse("powlog:1,1");
  CHECK(g(2.0) == doctest::Approx(2.0 * std::log(3.0)));
  CHECK(ModerateFunction::parse("pow:0.5")(4.0) == doctest::Approx(2.0));
  CHECK_THROWS(ModerateFunction::parse("pow:"));
  CHECK_THROWS(ModerateFunction::parse("exp:1"));
  CHECK_THROWS(ModerateFunction::parse("pow:-1"));
  CHECK_THROWS(ModerateFunction::parse("powlog:1"));
}

TEST_CASE("moderacy ratios") {
  const auto grid = default_moderacy_grid();
  CHECK(moderacy_ratio(ModerateFunction::power(2.0), 2.0, grid).sup == doctest::Approx(4.0));
  CHECK(moderacy_ratio(ModerateFunction::power_log(1.0, 1.0), 2.0, grid).sup ==
        doctest::Approx(oracle::kPowLog11Ratio).epsilon(1e-12));
}

TEST_CASE("non-moderate functions are rejected") {
  CHECK_THROWS_AS(ModerateFunction::custom("exp", [](double x) { return std::expm1(x); }),
                  NotModerateError);
  CHECK_THROWS_AS(ModerateFunction::custom("decreasing", [](double x) { return 1.0 / (1.0 + x); }),
                  NotModerateError);
}

TEST_CASE("builtin catalog") {
  const auto cat = builtin_catalog();
  REQUIRE(cat.size() == 6);
  CHECK(cat.front().descriptor() == "pow:0.5");
  CHECK(cat.back().descriptor() == "powlog:2,1");
}
