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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maxineq/moderate.hpp"
#include "maxineq/montecarlo.hpp"
#include "maxineq/process.hpp"
#include "maxineq/sde.hpp"

namespace maxineq {

using Json = nlohmann::json;

// Ordered by severity: combining two verdicts keeps the worse one.
enum class Verdict { kPass = 0, kInconclusive = 1, kFail = 2 };

std::string_view verdict_name(Verdict v);
Verdict worst(Verdict a, Verdict b);

struct CheckReport {
  std::string name;
  Json parameters = Json::object();
  Verdict verdict = Verdict::kPass;
  // For a fail, the offending point; for inconclusive, the binding limit.
  std::string reason;
  Json witness = Json::object();
  std::vector<std::uint64_t> seeds;

  bool passed() const { return verdict == Verdict::kPass; }
};

Json to_json(const CheckReport& report);

// {"kind": ..., parameters..., "x0": ...} for reports and manifests.
Json process_json(const ProcessSpec& spec);

// Folds several reports into one named report with the worst verdict; the
// parts are kept under witness["parts"].
CheckReport combine_reports(std::string name, std::vector<CheckReport> parts);

// ---------------------------------------------------------------------------
// Controllability: sup_{|x| = lambda} P_x(X*_t >= beta lambda) <= C P_0(X*_t >= gamma lambda).

struct ControllabilityConstants {
  double beta = 2.0;
  double gamma = 1.0;
  double C = 1.0;
};

// OU (2, 1, 1); BESQ (4, 2^-ceil(1/dim), 2^ceil(1/dim)); ReflectedBMDrift
// (2, 1, 2). Other kinds throw ParameterError.
ControllabilityConstants default_controllability(const ProcessSpec& spec);

struct ControllabilityOptions {
  std::vector<double> times;
  std::vector<double> levels;
  std::size_t n_paths = 20000;
  GridPolicy grid = GridPolicy::per_unit(4096.0, std::size_t{1} << 12, 64);
  McOptions mc;
  double ci_multiplier = 4.0;
};

CheckReport controllability_check(const ProcessSpec& spec, const ControllabilityConstants& k,
                                  const ControllabilityOptions& options);

// ---------------------------------------------------------------------------
// Good lambda: phi_hat(delta) = sup_lambda #{X >= beta lambda, Y < delta lambda} / #{X >= lambda}.

struct GoodLambdaOptions {
  double beta = 2.0;
  std::vector<double> deltas;  // decreasing
  std::vector<double> lambdas;
  // Analytic phi(delta) per entry of deltas; empty when none is known.
  std::vector<double> analytic;
  double ci_multiplier = 4.0;
};

CheckReport good_lambda_check(std::span<const double> x, std::span<const double> y,
                              const GoodLambdaOptions& options);

struct HittingPairs {
  std::vector<double> growth;   // g(tau)
  std::vector<double> maximum;  // X*_tau
  std::vector<double> levels;   // level assigned to each path
  double censored_fraction = 0.0;
};

// tau = first passage of a level, with path i assigned levels[i % levels.size()].
HittingPairs hitting_pairs(const ProcessSpec& spec, std::span<const double> levels, double cap,
                           std::size_t n_paths, const GridPolicy& grid, const McOptions& options);

// Analytic phi for OU (rate delta^2) and BMDrift (delta); empty otherwise.
std::optional<double> analytic_phi(const ProcessSpec& spec, double delta);

// ---------------------------------------------------------------------------
// Two-sided moderate inequality at deterministic times and hitting times.

struct EnvelopeLimits {
  std::vector<double> spread;  // one per F
  double min_ratio = 1e-3;
};

struct TwoSidedOptions {
  std::vector<double> times;
  std::size_t n_paths = 100000;
  GridPolicy grid = GridPolicy::per_unit(4096.0, std::size_t{1} << 14, 32);
  McOptions mc;
  double z = 1.959963984540054;
  bool pilot = true;
  // Hitting-time spot check; skipped when levels is empty.
  std::vector<double> spot_levels;
  double spot_cap = 1e4;
  std::size_t spot_paths = 10000;
  double max_censored = 0.01;
};

struct GrowthOverride {
  std::string formula;
  std::function<double(double)> g;
};

// Envelope verdicts from an existing sup sample matrix, optionally against a
// growth function other than the process's own.
CheckReport two_sided_from_samples(const ProcessSpec& spec, std::span<const double> samples,
                                   std::span<const double> times,
                                   std::span<const ModerateFunction> fs,
                                   const EnvelopeLimits& limits, const TwoSidedOptions& options,
                                   const std::optional<GrowthOverride>& growth = std::nullopt);

// E F(X*_tau) / E F(g(tau)) for tau the first passage of each level.
CheckReport hitting_spot_check(const ProcessSpec& spec, std::span<const ModerateFunction> fs,
                               const TwoSidedOptions& options);

CheckReport two_sided_check(const ProcessSpec& spec, std::span<const ModerateFunction> fs,
                            const EnvelopeLimits& limits, const TwoSidedOptions& options,
                            const std::optional<GrowthOverride>& growth = std::nullopt);

Json envelope_json(const RatioEnvelope& envelope);

// ---------------------------------------------------------------------------
// Lp bound for BESQ: E (Y*_t)^p <= dim^p (2 - p) / (1 - p) t^p, 0 < p < 1.

double lp_bound(double dim, double p, double t);

struct LpOptions {
  std::vector<double> times;
  std::vector<double> exponents;
  std::size_t n_paths = 100000;
  GridPolicy grid = GridPolicy::standard();
  McOptions mc;
  double se_multiplier = 4.0;
};

CheckReport lp_bound_check(double dim, const LpOptions& options);

// ---------------------------------------------------------------------------
// Equality in law by the two-sample KS test.

struct SamplePair {
  std::string label;
  std::vector<double> a;
  std::vector<double> b;
};

CheckReport distribution_equiv(const SamplePair& pair, double ks_level = 0.01);

// |Z_t|^2 for ComplexOU(rate, rotation) against CIR(2, -2 rate, 2), both from 0.
SamplePair complex_ou_vs_cir(double rate, double rotation, double t, std::size_t n,
                             std::uint64_t seed);
// CIR by 16 composed exact steps against e^{bt} Y_{c^2 (e^{-bt} - 1) / (4|b|)}
// with Y a BESQ(4a/c^2) drawn directly.
SamplePair cir_vs_time_changed_besq(const CIR& params, double t, std::size_t n,
                                    std::uint64_t seed);
SamplePair besq_additivity(double dim_a, double dim_b, double t, std::size_t n,
                           std::uint64_t seed);
// |e^{-at} W_{e^{2at} - 1}| / sqrt(2a) against |Z_t| for ComplexOU(a, b).
SamplePair time_changed_complex_bm(double rate, double rotation, double t, std::size_t n,
                                   std::uint64_t seed);
// Two independent sets of exact CIR draws from 0.
SamplePair cir_self_pair(const CIR& params, double t, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Conformal martingales M = phi(W) for complex BM W, with [X, X] the quadratic
// variation of Re M.

enum class ConformalMap { kIdentity, kSquare, kExponential };

std::string_view conformal_map_name(ConformalMap map);
ConformalMap parse_conformal_map(std::string_view name);

struct ConformalSamples {
  std::vector<double> times;
  std::size_t n_paths = 0;
  std::size_t steps = 0;
  // Row-major n_paths x times: running max |M|, running max |M| / sqrt(1 + [X,X]),
  // [X,X] from squared increments, and the integral of |phi'(W)|^2.
  std::vector<double> max_modulus;
  std::vector<double> max_normalized;
  std::vector<double> qv_sum;
  std::vector<double> qv_integral;
};

ConformalSamples conformal_samples(ConformalMap map, std::span<const double> times,
                                   std::size_t n_paths, const GridPolicy& grid,
                                   const McOptions& options);

struct ConformalOptions {
  std::vector<double> times;
  std::size_t n_paths = 10000;
  GridPolicy grid = GridPolicy::per_unit(4096.0, std::size_t{1} << 14, 64);
  McOptions mc;
  double z = 1.959963984540054;
  double max_refinement_delta = 0.05;
  double min_ratio = 1e-3;
};

struct ConformalLimits {
  std::vector<double> plain;       // spread per F for E F(M*) / E F(sqrt([X,X]))
  std::vector<double> normalized;  // spread per F for the normalized maximum
};

struct ConformalEnvelopes {
  std::vector<RatioEnvelope> plain;
  std::vector<RatioEnvelope> normalized;
  double refinement_delta = 0.0;  // E [X,X] at n vs 2n steps, relative
  double agreement_delta = 0.0;   // increments vs integral, relative
};

ConformalEnvelopes conformal_envelopes(ConformalMap map, std::span<const ModerateFunction> fs,
                                       const ConformalOptions& options);

CheckReport conformal_scenario(ConformalMap map, std::span<const ModerateFunction> fs,
                               const ConformalLimits& limits, const ConformalOptions& options);

// The identity map against ComplexBM envelopes (both forms) on the same grid:
// per-point ratios must agree within z times the joint standard error.
CheckReport conformal_identity_check(std::span<const ModerateFunction> fs,
                                     const ConformalOptions& options, double z = 4.0);

}  // namespace maxineq
