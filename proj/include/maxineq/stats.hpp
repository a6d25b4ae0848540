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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace maxineq {

// Streaming mean and variance (Welford). Merging follows Chan et al.; callers
// merge in a fixed order so results do not depend on scheduling.
class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double standard_error() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Proportion {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 1.0;
};

// Wilson score interval at normal quantile z.
Proportion wilson(std::size_t hits, std::size_t trials, double z = 1.959963984540054);

// Two-sided standard normal quantile for coverage `level` (0.95 -> 1.96).
double normal_quantile_two_sided(double level);

// sup |F_a - F_b| between empirical distribution functions.
double ks_statistic(std::span<const double> a, std::span<const double> b);
// sup |F_n - F| against a continuous reference CDF.
double ks_statistic(std::span<const double> a, const std::function<double(double)>& cdf);

// Asymptotic critical values c(alpha) sqrt((n + m) / (n m)) and c(alpha) / sqrt(n),
// with c(alpha) = sqrt(-log(alpha / 2) / 2).
double ks_critical(double alpha, std::size_t n, std::size_t m);
double ks_critical(double alpha, std::size_t n);

}  // namespace maxineq
