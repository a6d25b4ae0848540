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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maxineq {

class NotModerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct RatioSup {
  double sup;
  double argmax;
  bool diverges;  // non-finite, or still climbing at the top of the grid
};

// Empirical moderacy certificate: sup of F(beta x) / F(x) over a finite grid.
// Necessary but not sufficient for moderacy.
struct ModerateCertificate {
  double beta = 2.0;
  double sup_ratio = 0.0;
  double argmax = 0.0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
};

// Continuous nondecreasing F on [0, inf) with F(0) = 0 and a finite
// certificate. Built-ins are x^p and x^p log^q(1 + x); compose_sqrt gives
// x -> F(sqrt(x)).
class ModerateFunction {
 public:
  static ModerateFunction power(double p);
  static ModerateFunction power_log(double p, double q);
  // Arbitrary F; throws NotModerateError when the certificate fails.
  static ModerateFunction custom(std::string name, std::function<double(double)> f);
  // "pow:p" or "powlog:p,q".
  static ModerateFunction parse(std::string_view descriptor);

  double operator()(double x) const;
  ModerateFunction compose_sqrt() const;

  const std::string& descriptor() const { return descriptor_; }
  const ModerateCertificate& certificate() const { return certificate_; }

 private:
  enum class Form { kPower, kPowerLog, kCustom };
  ModerateFunction(Form form, double p, double q, std::string descriptor);
  void certify();

  Form form_;
  double p_ = 1.0;
  double q_ = 0.0;
  int sqrt_depth_ = 0;
  std::function<double(double)> custom_;
  std::string descriptor_;
  ModerateCertificate certificate_;
};

// max over the grid of F(beta x) / F(x), with 0/0 = 1. Throws
// NotModerateError when F is negative or decreasing on the grid.
RatioSup moderacy_ratio(const std::function<double(double)>& f, double beta,
                        std::span<const double> grid);
RatioSup moderacy_ratio(const ModerateFunction& f, double beta, std::span<const double> grid);

// [1e-6, 1e6] at 16 points per decade.
std::vector<double> default_moderacy_grid();

// pow:0.5, pow:1, pow:2, pow:3, powlog:1,1, powlog:2,1.
std::vector<ModerateFunction> builtin_catalog();

}  // namespace maxineq
