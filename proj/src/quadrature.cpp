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

#include "maxineq/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>

#include "maxineq/process.hpp"

namespace maxineq {

Integral integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (a == b) return {0.0, 0.0};
  // The rule's error estimate has an absolute floor near machine epsilon, so
  // the integrand is mapped to [0, 1] and normalized to unit L1 norm first.
  double l1 = 0.0;
  Rule::integrate(f, a, b, 0, 0.0, nullptr, &l1);
  if (l1 == 0.0 || !std::isfinite(l1)) {
    double error = 0.0;
    const double value = Rule::integrate(f, a, b, 15, rel_tol, &error);
    return {value, error};
  }
  const double width = b - a;
  const double scale = width / l1;
  double error = 0.0;
  const double value = Rule::integrate(
      [&](double t) { return scale * f(a + width * t); }, 0.0, 1.0, 15, rel_tol, &error);
  return {value * l1, error * l1};
}

double solve_increasing(const std::function<double(double)>& f, double target, double lo,
                        double hi) {
  auto h = [&](double x) { return f(x) - target; };
  double f_lo = h(lo);
  if (f_lo >= 0.0) return lo;
  double f_hi = h(hi);
  // A lower end at -inf (a log at zero) would poison the interpolation.
  if (!std::isfinite(f_lo) && f_hi < 0.0) {
    lo = hi;
    f_lo = f_hi;
  }
  for (int shrink = 0; !std::isfinite(f_lo) && shrink < 2000; ++shrink) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = h(mid);
    if (f_mid >= 0.0) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  for (int grow = 0; f_hi < 0.0; ++grow) {
    if (grow > 2000 || !std::isfinite(hi)) throw DomainError("root bracket could not be grown");
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = h(hi);
  }
  if (f_hi == 0.0) return hi;
  std::uintmax_t max_iter = 200;
  const auto [left, right] = boost::math::tools::toms748_solve(
      h, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
  return 0.5 * (left + right);
}

double log_expm1(double z) {
  if (z > 30.0) return z + std::log1p(-std::exp(-z));
  return std::log(std::expm1(z));
}

}  // namespace maxineq
