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

#include <functional>

namespace maxineq {

struct Integral {
  double value;
  double error;  // absolute error estimate
};

// Adaptive 15-point Gauss-Kronrod quadrature over a finite interval.
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-12);

// Root of an increasing function: the x >= lo with f(x) = target. The upper
// bracket is grown geometrically from `hi` until it straddles the target.
double solve_increasing(const std::function<double(double)>& f, double target, double lo,
                        double hi);

// log(e^z - 1) for z > 0 without overflow.
double log_expm1(double z);

}  // namespace maxineq
