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
#include <vector>

#include "doctest.h"
#include "maxineq/stats.hpp"
#include "oracle_values.hpp"

using namespace maxineq;

TEST_CASE("accumulator merge equals a single pass") {
  Accumulator all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(0.37 * i) * 3.0 + 0.001 * i;
    all.add(x);
    (i < 300 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-13));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("wilson interval matches the closed form") {
  const auto p = wilson(7, 20);
  CHECK(p.estimate == doctest::Approx(0.35));
  CHECK(p.lower == doctest::Approx(oracle::kWilson_7_20_lower).epsilon(1e-12));
  CHECK(p.upper == doctest::Approx(oracle::kWilson_7_20_upper).epsilon(1e-12));
  const auto zero = wilson(0, 50);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper > 0.0);
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile_two_sided(0.99) == doctest::Approx(oracle::kNormalQuantile99).epsilon(1e-12));
}

TEST_CASE("two-sample KS statistic and critical value") {
  const std::vector<double> a(std::begin(oracle::kKsSampleA), std::end(oracle::kKsSampleA));
  const std::vector<double> b(std::begin(oracle::kKsSampleB), std::end(oracle::kKsSampleB));
  CHECK(ks_statistic(a, b) == doctest::Approx(oracle::kKsStatisticAB).epsilon(1e-12));
  CHECK(ks_statistic(b, a) == doctest::Approx(oracle::kKsStatisticAB).epsilon(1e-12));
  CHECK(ks_statistic(a, a) == 0.0);
  CHECK(ks_critical(0.01, 1000, 2000) ==
        doctest::Approx(oracle::kKsCritical_01_1000_2000).epsilon(1e-12));
}

TEST_CASE("one-sample KS against a uniform reference") {
  std::vector<double> u;
  for (int i = 0; i < 10; ++i) u.push_back((i + 0.5) / 10.0);
  CHECK(ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) ==
        doctest::Approx(0.05));
}
