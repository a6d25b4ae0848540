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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "maxineq/process.hpp"
#include "maxineq/rng.hpp"

namespace maxineq {

struct Transition {
  State state;
  bool exact;  // false: routed to euler_step
};

// Draw from the exact transition law of `spec` over `dt` when one is
// implemented; ReflectedBMDrift routes to euler_step and reports exact=false.
Transition sample_transition(const ProcessSpec& spec, State x, double dt, Rng& rng);

// One Euler-Maruyama step driven by explicit standard normal draws (the
// second draw is used by complex variants only). Square-root diffusions use
// full truncation; Bessel and RadialOU step their squared process.
State euler_step(const ProcessSpec& spec, State x, double dt, std::array<double, 2> draws);
State euler_step(const ProcessSpec& spec, State x, double dt, Rng& rng);

// Exact BESQ(dim) transition from x over time t.
double besq_draw(double dim, double x, double t, Rng& rng);

// (BESQ(a)+BESQ(a') at t, independent BESQ(a+a') at t), both started at 0.
std::pair<double, double> besq_additivity_pair(double dim_a, double dim_b, double t, Rng& rng);

// Observed value of a state: |x| for real variants, the modulus for complex
// ones, and the positive part for nonnegative variants (Euler full truncation
// can leave the internal state slightly below zero).
double observe(const ProcessSpec& spec, State x);

struct FixedTime {
  double horizon;
};
struct HittingLevel {
  double level;
  double cap;
};
struct FixedTimeMinHit {
  double horizon;
  double level;
};
using StoppingRule = std::variant<FixedTime, HittingLevel, FixedTimeMinHit>;

void validate(const StoppingRule& rule);

enum class Monitor {
  kModulus,     // |X_t|
  kNormalized,  // |X_t| / sqrt(1 + t)
  kUpper,       // X_t itself, for the one-sided maximum of a real process
};

std::string_view monitor_name(Monitor monitor);

struct GridPolicy {
  // Exactly one of the three sizing modes is active.
  std::size_t steps = 0;        // n uniform steps over the horizon
  double max_step = 0.0;        // steps no longer than this
  double steps_per_unit = 0.0;  // per-unit density with a total cap
  std::size_t max_total_steps = std::size_t{1} << 20;
  std::size_t min_segment_steps = 1;

  bool force_euler = false;
  bool bridge_correction = false;
  Monitor monitor = Monitor::kModulus;

  static GridPolicy uniform(std::size_t n);
  static GridPolicy step(double h);
  static GridPolicy per_unit(double density, std::size_t cap = std::size_t{1} << 20,
                             std::size_t min_segment = 1);
  // 2^12 steps per unit time, at most 2^20 steps per path.
  static GridPolicy standard() { return per_unit(4096.0); }
};

// The same policy at twice the resolution (and twice the step cap).
GridPolicy refine(const GridPolicy& grid);

// Step length used for hitting rules, which have no fixed horizon.
double base_step(const GridPolicy& grid, double horizon);

struct HitRecord {
  double level = 0.0;
  std::optional<std::size_t> index;  // first grid index with value >= level
  double time = 0.0;                 // refined hitting time (or the cap)
  bool censored = false;
};

struct PathSkeleton {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> running_max;
  std::optional<HitRecord> hit;
  bool censored = false;
  bool used_euler = false;
};

PathSkeleton simulate_path(const ProcessSpec& spec, const StoppingRule& rule,
                           const GridPolicy& grid, Rng& rng);

// Piecewise-uniform time grid through a sorted list of observation times.
class TimeGrid {
 public:
  struct Segment {
    double start;
    double dt;
    std::size_t count;
  };

  TimeGrid(std::span<const double> observation_times, const GridPolicy& policy);

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t total_steps() const;
  double horizon() const { return segments_.empty() ? 0.0 : end_time(segments_.size() - 1); }
  double end_time(std::size_t segment) const;

 private:
  std::vector<Segment> segments_;
};

// Advances one path step by step while tracking the running supremum of the
// monitored quantity. Reused by simulate_path and the Monte Carlo estimators.
class PathWalker {
 public:
  PathWalker(const ProcessSpec& spec, const GridPolicy& policy);

  void reset(State x0);
  void reset() { reset(spec_.x0()); }
  void step(double dt, Rng& rng);

  double time() const { return time_; }
  State state() const { return state_; }
  double value() const { return value_; }
  double running_max() const { return running_max_; }
  // Supremum over the last step, including the bridge correction when enabled.
  double last_step_max() const { return last_step_max_; }
  bool uses_euler() const { return euler_; }

  // Midpoint of the last step drawn from the Brownian bridge between its
  // endpoints, as a monitored value. Used to refine hitting times once.
  double bridge_midpoint(Rng& rng) const;

  const ProcessSpec& spec() const { return spec_; }

 private:
  void prepare(double dt);
  State exact_step(State x, Rng& rng);
  double monitored(State x, double t) const;
  double local_sigma(State x) const;

  ProcessSpec spec_;
  bool euler_;
  bool bridge_;
  Monitor monitor_;

  // Cached coefficients for the last dt.
  double dt_ = -1.0;
  double decay_ = 0.0;
  double sd_ = 0.0;
  double rho_ = 0.0;
  double sqrt_dt_ = 0.0;
  State rotation_{};

  double time_ = 0.0;
  State state_{};
  State prev_state_{};
  double value_ = 0.0;
  double running_max_ = 0.0;
  double last_step_max_ = 0.0;
};

// Hitting time of `level` by the monitored value, refined by one bridge
// bisection; censored when `cap` is reached first.
struct HitOutcome {
  double time;
  double running_max;  // at the stopping time; exactly the level on a hit
  bool hit;
  bool censored;  // the cap bound before the level or the horizon
};
HitOutcome run_until_hit(PathWalker& walker, double level, double cap, double dt, Rng& rng,
                         std::optional<double> horizon = std::nullopt);

}  // namespace maxineq
