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
#include "maxineq/analytic.hpp"
#include "maxineq/quadrature.hpp"
#include "oracle_values.hpp"

using namespace maxineq;

TEST_CASE("OU scale function against quadrature references") {
  CHECK(f_eval(ProcessSpec(OU{1.0}), 0.5) == doctest::Approx(oracle::kOuScale_a1_x0p5).epsilon(1e-10));
  CHECK(f_eval(ProcessSpec(OU{1.0}), 1.0) == doctest::Approx(oracle::kOuScale_a1_x1).epsilon(1e-10));
  CHECK(f_eval(ProcessSpec(OU{1.0}), 2.0) == doctest::Approx(oracle::kOuScale_a1_x2).epsilon(1e-10));
  CHECK(f_eval(ProcessSpec(OU{1.0}), -2.0) == doctest::Approx(oracle::kOuScale_a1_x2).epsilon(1e-10));
  CHECK(f_eval(ProcessSpec(OU{0.5}), 1.0) == doctest::Approx(oracle::kOuScale_a0p5_x1).epsilon(1e-10));
  CHECK(f_eval(ProcessSpec(OU{2.0}), 1.5) == doctest::Approx(oracle::kOuScale_a2_x1p5).epsilon(1e-10));
}

TEST_CASE("CIR scale function against hypergeometric references") {
  CHECK(f_eval(ProcessSpec(CIR{1.0, -1.0, 1.0}), 0.5) ==
        doctest::Approx(oracle::kCirScale_a1_b1_c1_x0p5).epsilon(1e-9));
  CHECK(f_eval(ProcessSpec(CIR{1.0, -1.0, 1.0}), 3.0) ==
        doctest::Approx(oracle::kCirScale_a1_b1_c1_x3).epsilon(1e-9));
  CHECK(f_eval(ProcessSpec(CIR{2.0, -0.5, 1.0}), 1.0) ==
        doctest::Approx(oracle::kCirScale_a2_b0p5_c1_x1).epsilon(1e-9));
}

TEST_CASE("BMDrift growth inverts the closed-form scale function") {
  const ProcessSpec s1(BMDrift{1.0});
  CHECK(g_eval(s1, 0.01) == doctest::Approx(oracle::kBmDriftGrowth_m1_t0p01).epsilon(1e-10));
  CHECK(g_eval(s1, 1.0) == doctest::Approx(oracle::kBmDriftGrowth_m1_t1).epsilon(1e-10));
  CHECK(g_eval(s1, 1000.0) == doctest::Approx(oracle::kBmDriftGrowth_m1_t1000).epsilon(1e-10));
  CHECK(g_eval(ProcessSpec(BMDrift{0.5}), 10.0) ==
        doctest::Approx(oracle::kBmDriftGrowth_m0p5_t10).epsilon(1e-10));
  CHECK(bm_drift_scale(1.0, 0.75262074789644168) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form growth functions") {
  CHECK(g_eval(ProcessSpec(OU{2.0}), 3.0) == doctest::Approx(std::sqrt(std::log(7.0))));
  CHECK(g_eval(ProcessSpec(BESQ{0.5}), 3.0) == doctest::Approx(3.0));
  CHECK(g_eval(ProcessSpec(Bessel{3.0}), 4.0) == doctest::Approx(2.0));
  CHECK(g_eval(ProcessSpec(ComplexOU{0.5, 1.0}), 2.0) == doctest::Approx(std::sqrt(std::log(3.0))));
  CHECK(g_eval(ProcessSpec(ComplexBM{}), 9.0, Monitor::kNormalized) ==
        doctest::Approx(std::sqrt(std::log1p(std::log(10.0)))));
  // CIR: (c^2 / 2|b|) log(1 + (2a|b| / c^2) t).
  CHECK(g_eval(ProcessSpec(CIR{1.0, -1.0, 2.0}), 4.0) == doctest::Approx(2.0 * std::log(3.0)));
}

TEST_CASE("growth round trip") {
  const std::vector<ProcessSpec> specs = {
      ProcessSpec(OU{1.0}),           ProcessSpec(BMDrift{0.5}),     ProcessSpec(CIR{1.0, -1.0, 1.0}),
      ProcessSpec(BESQ{0.5}),         ProcessSpec(Bessel{2.0}),      ProcessSpec(RadialOU{2.0, 1.0}),
      ProcessSpec(ComplexOU{1.0, 0.0}), ProcessSpec(ComplexBM{})};
  for (const auto& s : specs) {
    const GrowthFunction g(s);
    for (double t : log_grid(1e-3, 1e6, 2)) {
      CAPTURE(kind_name(s.kind()));
      CAPTURE(t);
      CHECK(g.inverse(g(t)) == doctest::Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("generator residual vanishes for the scale functions") {
  // Grids end where f' is still moderate: two stationary deviations for OU.
  CHECK(check_generator_residual(ProcessSpec(OU{1.0}), log_points(0.05, std::sqrt(2.0), 16))
            .max_abs <= 1e-6);
  CHECK(check_generator_residual(ProcessSpec(BMDrift{2.0}), log_points(0.05, 1.0, 16)).max_abs <=
        1e-6);
  const auto grid = log_points(0.05, 3.0, 16);
  CHECK(check_generator_residual(ProcessSpec(BESQ{0.5}), grid).max_abs <= 1e-6);
  CHECK(check_generator_residual(ProcessSpec(CIR{1.0, -1.0, 2.0}), grid).max_abs <= 1e-6);
  // Far out the truncation error of the stencil dominates.
  CHECK(check_generator_residual(ProcessSpec(OU{2.0}), log_points(1.0, 3.0, 4)).max_abs > 1e-6);
}

TEST_CASE("sandwich bounds") {
  const auto grid = log_points(1e-4, 1e4, 64);
  CHECK(sandwich_bm_drift(1.0, grid).min_slack >= 0.0);
  CHECK(sandwich_cir(CIR{1.0, -1.0, 1.0}, grid).min_slack >= 0.0);
}

TEST_CASE("OU phi equals the small-lambda limit") {
  const ProcessSpec ou(OU{1.0});
  const auto phi = compute_phi(ou, 2.0, 0.5, default_lambda_grid());
  CHECK(phi.value == doctest::Approx(oracle::kOuPhiRatio_a1_beta2_d0p5_l1em4).epsilon(1e-6));
  CHECK(phi.value <= phi_bound(ou, 2.0, 0.5));
  const std::vector<double> one{0.3};
  CHECK(compute_phi(ou, 2.0, 0.5, one).value ==
        doctest::Approx(oracle::kOuPhiRatio_a1_beta2_d0p5_l0p3).epsilon(1e-9));
}

TEST_CASE("log grids keep whole decades exact") {
  const auto g = log_grid(1e-2, 1e4, 2);
  REQUIRE(g.size() == 13);
  CHECK(g[0] == 1e-2);
  CHECK(g[4] == 1.0);
  CHECK(g[6] == 10.0);
  CHECK(g[12] == 1e4);
}

TEST_CASE("quadrature") {
  const auto r = integrate([](double x) { return std::exp(-x * x); }, 0.0, 3.0);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI) / 2.0 * std::erf(3.0)).epsilon(1e-13));
  CHECK(solve_increasing([](double x) { return x * x * x; }, 27.0, 0.0, 1.0) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(log_expm1(800.0) == doctest::Approx(800.0));
  CHECK(log_expm1(1.0) == doctest::Approx(std::log(std::expm1(1.0))));
}
