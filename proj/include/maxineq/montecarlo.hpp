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
#include <stdexcept>
#include <string>
#include <vector>

#include "maxineq/moderate.hpp"
#include "maxineq/process.hpp"
#include "maxineq/rng.hpp"
#include "maxineq/sde.hpp"
#include "maxineq/stats.hpp"

namespace maxineq {

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct McOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t chunk = 256;  // paths per scheduling unit
  std::uint64_t stream = streams::kPaths;
};

// Running maximum of the monitored value at each observation time, one row
// per path: result[i * times.size() + k].
std::vector<double> sup_samples(const ProcessSpec& spec, std::span<const double> times,
                                std::size_t n_paths, const GridPolicy& grid,
                                const McOptions& options);

// First passage of `level` per path, censored at `cap` or stopped at `horizon`.
std::vector<HitOutcome> hitting_samples(const ProcessSpec& spec, double level, double cap,
                                        std::size_t n_paths, const GridPolicy& grid,
                                        const McOptions& options,
                                        std::optional<double> horizon = std::nullopt);

struct MaximalEstimate {
  std::size_t n_paths = 0;
  double mean = 0.0;  // of F(X*_tau)
  double standard_error = 0.0;
  double growth_mean = 0.0;  // of F(g(tau))
  double growth_standard_error = 0.0;
  double step = 0.0;  // largest step length used
  std::size_t steps = 0;  // steps per path for fixed-time rules
  std::optional<double> refinement_delta;  // |estimate(n) - estimate(2n)| on a 10% pilot
  double censored_fraction = 0.0;
  bool used_euler = false;
};

// E F(X*_tau) by Monte Carlo. A refinement pilot runs whenever Euler paths are
// used, or when `pilot` is set.
MaximalEstimate estimate_sup_expectation(const ProcessSpec& spec, const ModerateFunction& f,
                                         const StoppingRule& rule, std::size_t n_paths,
                                         const GridPolicy& grid, const McOptions& options,
                                         bool pilot = false);

// P_{x0}(X*_t >= level) with a Wilson interval.
Proportion estimate_tail(const ProcessSpec& spec, State x0, double t, double level,
                         std::size_t n_paths, const GridPolicy& grid, const McOptions& options,
                         double z = 1.959963984540054);

struct EnvelopePoint {
  double time = 0.0;
  double mean = 0.0;  // E F(X*_t)
  double standard_error = 0.0;
  double growth = 0.0;  // F(g(t))
  double ratio = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct RatioEnvelope {
  std::string moderate;
  std::vector<EnvelopePoint> points;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread = 0.0;  // max / min
  std::size_t n_paths = 0;
  std::size_t steps = 0;  // per path
  double z = 0.0;         // CI multiplier on the log ratio
  // max over points of |m(n) - m(2n)| / m(2n) on a 10% pilot, when requested.
  std::optional<double> refinement_delta;
};

// Ratio envelopes for several F from one set of paths.
std::vector<RatioEnvelope> ratio_envelopes(const ProcessSpec& spec,
                                           std::span<const ModerateFunction> fs,
                                           std::span<const double> times, std::size_t n_paths,
                                           const GridPolicy& grid, const McOptions& options,
                                           double z = 1.959963984540054, bool pilot = false);
RatioEnvelope ratio_envelope(const ProcessSpec& spec, const ModerateFunction& f,
                             std::span<const double> times, std::size_t n_paths,
                             const GridPolicy& grid, const McOptions& options,
                             double z = 1.959963984540054);

// Envelope of one F from an existing sup sample matrix (as returned by
// sup_samples) against an arbitrary growth map. Leaves n_paths, steps and the
// refinement delta to the caller.
RatioEnvelope envelope_from_samples(std::span<const double> samples,
                                    std::span<const double> times,
                                    const std::function<double(double)>& growth,
                                    const ModerateFunction& f, const McOptions& options,
                                    double z = 1.959963984540054);

// Fills min, max and spread from the points.
void summarize(RatioEnvelope& envelope);

}  // namespace maxineq
