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
#include <span>
#include <string>
#include <vector>

#include "maxineq/process.hpp"
#include "maxineq/quadrature.hpp"
#include "maxineq/sde.hpp"

namespace maxineq {

// Deterministic growth rate g of the maximal process, with its inverse.
// The normalized form exists for ComplexBM only and pairs with
// Monitor::kNormalized: g(t) = log^{1/2}(1 + log(1 + t)).
class GrowthFunction {
 public:
  explicit GrowthFunction(ProcessSpec spec, Monitor form = Monitor::kModulus);

  double operator()(double t) const;
  double inverse(double y) const;

  // log g^{-1}(y), finite where g^{-1}(y) itself overflows.
  double log_inverse(double y) const;
  // g(e^s), finite where e^s itself overflows.
  double from_log(double s) const;

  bool closed_form() const;
  std::string formula() const;

  const ProcessSpec& spec() const { return spec_; }
  Monitor form() const { return form_; }

 private:
  ProcessSpec spec_;
  Monitor form_;
};

double g_eval(const ProcessSpec& spec, double t, Monitor form = Monitor::kModulus);
double g_inverse(const ProcessSpec& spec, double y, Monitor form = Monitor::kModulus);

// BMDrift scale function f_mu(x) = (e^{2 mu x} - 2 mu x - 1) / (2 mu^2) and
// its logarithm for large positive x.
double bm_drift_scale(double mu, double x);
double bm_drift_log_scale(double mu, double x);

// Solution of Lf = 1 with f(0) = 0 for OU, BMDrift, ReflectedBMDrift, CIR and
// BESQ. Other kinds throw DomainError at construction.
class ScaleFunction {
 public:
  explicit ScaleFunction(ProcessSpec spec);

  double operator()(double x) const { return evaluate(x).value; }
  Integral evaluate(double x) const;
  double derivative(double x) const;
  // log f(x); stays finite for OU and CIR where f overflows.
  double log_value(double x) const;

  bool closed_form() const;
  bool even() const;
  bool nonnegative_domain() const;
  const ProcessSpec& spec() const { return spec_; }

 private:
  void check_domain(double x) const;
  Integral ou(double x) const;
  double ou_log(double x) const;
  double ou_inner(double u) const;
  Integral cir(double x) const;
  double cir_log(double x) const;
  double cir_tilde(double t) const;

  ProcessSpec spec_;
  double ou_cap_ = 0.0;        // e^{-alpha v^2} is negligible beyond this
  double ou_saturated_ = 0.0;  // inner integral over [0, ou_cap_]
};

double f_eval(const ProcessSpec& spec, double x);

// Drift b(x) and squared diffusion sigma^2(x) of a real process.
double drift_coefficient(const ProcessSpec& spec, double x);
double diffusion_squared(const ProcessSpec& spec, double x);

// Log-spaced grid with `per_decade` points per decade, both ends included.
std::vector<double> log_grid(double lo, double hi, int per_decade);
// Exactly n log-spaced points on [lo, hi].
std::vector<double> log_points(double lo, double hi, std::size_t n);

struct PhiEstimate {
  double value;
  double argmax;  // lambda attaining the sup
};

// Numerical sup over lambda of (f(delta lambda) v f(-delta lambda)) /
// (g^{-1}(beta lambda) - g^{-1}(lambda)), with one local refinement around the
// grid argmax. Nonnegative processes use f(delta lambda) alone.
PhiEstimate compute_phi(const ProcessSpec& spec, double beta, double delta,
                        std::span<const double> lambda_grid);
// lambda in [1e-4, 1e4] at 32 points per decade.
std::vector<double> default_lambda_grid();

// Closed-form upper bounds on phi(delta) where they are known: OU alpha
// delta^2, BMDrift and ReflectedBMDrift delta, BESQ delta / (alpha (beta - 1)).
// Returns a negative value when no bound is available.
double phi_bound(const ProcessSpec& spec, double beta, double delta);

struct Residual {
  double max_abs;
  double worst_x;
};

// max |b f' + sigma^2 f'' / 2 - 1| over the grid; f'' is the five-point
// central difference of f' with step 1e-3 (1 + |x|). Grid points need
// x - 2h > 0 for the nonnegative processes.
Residual check_generator_residual(const ProcessSpec& spec, std::span<const double> x_grid);

struct SandwichResult {
  double min_slack;  // relative; negative means the bracket is violated
  double worst_x;
};

// (1/2mu) log(mu sqrt(x) + 1) <= g_mu(x) <= (2/mu) log(mu sqrt(x) + 1).
SandwichResult sandwich_bm_drift(double mu, std::span<const double> grid);
// f1 <= f <= f2 for CIR, compared in log space.
SandwichResult sandwich_cir(const CIR& params, std::span<const double> grid);

}  // namespace maxineq
