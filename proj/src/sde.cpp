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

#include "maxineq/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maxineq {
namespace {

constexpr int kMaxIntegerDim = 16;

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

bool is_small_integer(double dim) {
  return dim >= 1.0 && dim <= kMaxIntegerDim && dim == std::floor(dim);
}

void require_positive_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
}

}  // namespace

double besq_draw(double dim, double x, double t, Rng& rng) {
  if (t <= 0.0) return x;
  x = positive_part(x);
  if (is_small_integer(dim)) {
    // |W_t|^2 for a dim-dimensional BM with |W_0|^2 = x.
    const double s = std::sqrt(t);
    const double lead = std::sqrt(x) + s * rng.normal();
    double y = lead * lead;
    for (int i = 1; i < static_cast<int>(dim); ++i) {
      const double z = rng.normal();
      y += t * z * z;
    }
    return y;
  }
  if (dim > 1.0) {
    // Noncentral chi-square(dim, x/t) = (Z + sqrt(x/t))^2 + chi-square(dim - 1).
    const double lead = std::sqrt(x) + std::sqrt(t) * rng.normal();
    return lead * lead + 2.0 * t * rng.gamma(0.5 * (dim - 1.0));
  }
  // Poisson mixture of gammas.
  const std::uint64_t k = rng.poisson(x / (2.0 * t));
  return 2.0 * t * rng.gamma(0.5 * dim + static_cast<double>(k));
}

std::pair<double, double> besq_additivity_pair(double dim_a, double dim_b, double t, Rng& rng) {
  if (!(dim_a > 0.0) || !(dim_b > 0.0)) throw ParameterError("BESQ dimensions must be positive");
  if (t < 0.0) throw ParameterError("time must be nonnegative");
  const double sum = besq_draw(dim_a, 0.0, t, rng) + besq_draw(dim_b, 0.0, t, rng);
  const double joint = besq_draw(dim_a + dim_b, 0.0, t, rng);
  return {sum, joint};
}

double observe(const ProcessSpec& spec, State x) {
  if (spec.is_complex()) return std::abs(x);
  if (spec.is_nonnegative()) return positive_part(x.real());
  return std::abs(x.real());
}

State euler_step(const ProcessSpec& spec, State x, double dt, std::array<double, 2> z) {
  require_positive_dt(dt);
  const double s = std::sqrt(dt);
  const double r = x.real();
  switch (spec.kind()) {
    case ProcessKind::kOU:
      return {r - spec.as<OU>().rate * r * dt + s * z[0], 0.0};
    case ProcessKind::kBMDrift:
      return {r - spec.as<BMDrift>().drift * dt + s * z[0], 0.0};
    case ProcessKind::kReflectedBMDrift:
      return {r - spec.as<ReflectedBMDrift>().drift * sign(r) * dt + s * z[0], 0.0};
    case ProcessKind::kCIR: {
      const auto& p = spec.as<CIR>();
      const double xp = positive_part(r);
      return {r + (p.level + p.rate * xp) * dt + p.vol * std::sqrt(xp) * s * z[0], 0.0};
    }
    case ProcessKind::kBESQ: {
      const double xp = positive_part(r);
      return {r + spec.as<BESQ>().dim * dt + 2.0 * std::sqrt(xp) * s * z[0], 0.0};
    }
    case ProcessKind::kBessel: {
      const double y = r * r;
      const double next = y + spec.as<Bessel>().dim * dt + 2.0 * r * s * z[0];
      return {std::sqrt(positive_part(next)), 0.0};
    }
    case ProcessKind::kRadialOU: {
      const auto& p = spec.as<RadialOU>();
      const double y = r * r;
      const double next = y + (p.dim - 2.0 * p.rate * y) * dt + 2.0 * r * s * z[0];
      return {std::sqrt(positive_part(next)), 0.0};
    }
    case ProcessKind::kComplexOU: {
      const auto& p = spec.as<ComplexOU>();
      const State drift = -State(p.rate, p.rotation) * x;
      return x + drift * dt + s * State(z[0], z[1]);
    }
    case ProcessKind::kComplexBM:
      return x + s * State(z[0], z[1]);
  }
  return x;
}

State euler_step(const ProcessSpec& spec, State x, double dt, Rng& rng) {
  std::array<double, 2> z{rng.normal(), 0.0};
  if (spec.is_complex()) z[1] = rng.normal();
  return euler_step(spec, x, dt, z);
}

Transition sample_transition(const ProcessSpec& spec, State x, double dt, Rng& rng) {
  require_positive_dt(dt);
  if (!spec.has_exact_sampler()) return {euler_step(spec, x, dt, rng), false};
  GridPolicy policy;
  PathWalker walker(spec, policy);
  walker.reset(x);
  walker.step(dt, rng);
  return {walker.state(), true};
}

void validate(const StoppingRule& rule) {
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FixedTime>) {
          if (!(r.horizon > 0.0) || !std::isfinite(r.horizon))
            throw ParameterError("FixedTime requires a finite horizon > 0");
        } else if constexpr (std::is_same_v<T, HittingLevel>) {
          if (!(r.level > 0.0)) throw ParameterError("HittingLevel requires level > 0");
          if (!(r.cap > 0.0) || !std::isfinite(r.cap))
            throw ParameterError("HittingLevel requires a finite cap > 0");
        } else {
          if (!(r.horizon > 0.0) || !std::isfinite(r.horizon))
            throw ParameterError("FixedTimeMinHit requires a finite horizon > 0");
          if (!(r.level > 0.0)) throw ParameterError("FixedTimeMinHit requires level > 0");
        }
      },
      rule);
}

GridPolicy GridPolicy::uniform(std::size_t n) {
  if (n == 0) throw ParameterError("uniform grid needs at least one step");
  GridPolicy g;
  g.steps = n;
  return g;
}

GridPolicy GridPolicy::step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("max step must be positive");
  GridPolicy g;
  g.max_step = h;
  return g;
}

GridPolicy GridPolicy::per_unit(double density, std::size_t cap, std::size_t min_segment) {
  if (!(density > 0.0)) throw ParameterError("step density must be positive");
  GridPolicy g;
  g.steps_per_unit = density;
  g.max_total_steps = cap;
  g.min_segment_steps = std::max<std::size_t>(1, min_segment);
  return g;
}

GridPolicy refine(const GridPolicy& g) {
  GridPolicy r = g;
  r.steps *= 2;
  r.max_step *= 0.5;
  r.steps_per_unit *= 2.0;
  r.max_total_steps *= 2;
  r.min_segment_steps *= 2;
  return r;
}

double base_step(const GridPolicy& g, double horizon) {
  if (g.steps > 0) return horizon / static_cast<double>(g.steps);
  if (g.max_step > 0.0) return g.max_step;
  if (g.steps_per_unit > 0.0) return 1.0 / g.steps_per_unit;
  throw ParameterError("grid policy has no sizing mode");
}

TimeGrid::TimeGrid(std::span<const double> obs, const GridPolicy& g) {
  if (obs.empty()) throw ParameterError("time grid needs at least one observation time");
  std::vector<double> lengths;
  double prev = 0.0;
  for (double t : obs) {
    if (!(t > prev) || !std::isfinite(t))
      throw ParameterError("observation times must be finite, positive and increasing");
    lengths.push_back(t - prev);
    prev = t;
  }
  const double horizon = prev;
  std::vector<std::size_t> counts(lengths.size());
  if (g.steps > 0) {
    for (std::size_t j = 0; j < lengths.size(); ++j) {
      counts[j] = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(g.steps * lengths[j] / horizon)));
    }
  } else if (g.max_step > 0.0) {
    for (std::size_t j = 0; j < lengths.size(); ++j)
      counts[j] = static_cast<std::size_t>(std::ceil(lengths[j] / g.max_step - 1e-9));
  } else if (g.steps_per_unit > 0.0) {
    auto fill = [&](double scale) {
      std::size_t total = 0;
      for (std::size_t j = 0; j < lengths.size(); ++j) {
        const double want = std::ceil(lengths[j] * g.steps_per_unit * scale - 1e-9);
        counts[j] = std::max<std::size_t>(g.min_segment_steps, static_cast<std::size_t>(want));
        total += counts[j];
      }
      return total;
    };
    if (fill(1.0) > g.max_total_steps) {
      if (g.min_segment_steps * lengths.size() > g.max_total_steps)
        throw ParameterError("step cap too small for the number of observation segments");
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fill(mid) > g.max_total_steps ? hi : lo) = mid;
      }
      fill(lo);
    }
  } else {
    throw ParameterError("grid policy has no sizing mode");
  }
  double start = 0.0;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    counts[j] = std::max<std::size_t>(1, counts[j]);
    segments_.push_back({start, lengths[j] / static_cast<double>(counts[j]), counts[j]});
    start = obs[j];
  }
}

std::size_t TimeGrid::total_steps() const {
  return std::accumulate(segments_.begin(), segments_.end(), std::size_t{0},
                         [](std::size_t acc, const Segment& s) { return acc + s.count; });
}

double TimeGrid::end_time(std::size_t j) const {
  const auto& s = segments_.at(j);
  return s.start + s.dt * static_cast<double>(s.count);
}

std::string_view monitor_name(Monitor monitor) {
  switch (monitor) {
    case Monitor::kNormalized:
      return "normalized";
    case Monitor::kUpper:
      return "upper";
    default:
      return "modulus";
  }
}

PathWalker::PathWalker(const ProcessSpec& spec, const GridPolicy& policy)
    : spec_(spec),
      euler_(policy.force_euler || !spec.has_exact_sampler()),
      bridge_(policy.bridge_correction && spec.has_unit_diffusion() &&
              policy.monitor != Monitor::kNormalized),
      monitor_(policy.monitor) {
  if (monitor_ == Monitor::kUpper && spec.is_complex())
    throw ParameterError("the upper monitor needs a real-valued process");
  reset(spec.x0());
}

void PathWalker::reset(State x0) {
  time_ = 0.0;
  state_ = x0;
  prev_state_ = x0;
  value_ = monitored(x0, 0.0);
  running_max_ = value_;
  last_step_max_ = value_;
}

double PathWalker::monitored(State x, double t) const {
  if (monitor_ == Monitor::kUpper) return x.real();
  const double v = observe(spec_, x);
  return monitor_ == Monitor::kNormalized ? v / std::sqrt(1.0 + t) : v;
}

double PathWalker::local_sigma(State x) const {
  switch (spec_.kind()) {
    case ProcessKind::kCIR:
      return spec_.as<CIR>().vol * std::sqrt(positive_part(x.real()));
    case ProcessKind::kBESQ:
      return 2.0 * std::sqrt(positive_part(x.real()));
    default:
      return 1.0;
  }
}

void PathWalker::prepare(double dt) {
  if (dt == dt_) return;
  dt_ = dt;
  sqrt_dt_ = std::sqrt(dt);
  switch (spec_.kind()) {
    case ProcessKind::kOU: {
      const double a = spec_.as<OU>().rate;
      decay_ = std::exp(-a * dt);
      sd_ = std::sqrt(-std::expm1(-2.0 * a * dt) / (2.0 * a));
      break;
    }
    case ProcessKind::kCIR: {
      const auto& p = spec_.as<CIR>();
      decay_ = std::exp(p.rate * dt);
      rho_ = p.vol * p.vol * (-std::expm1(-p.rate * dt)) / (4.0 * p.rate);
      break;
    }
    case ProcessKind::kRadialOU: {
      const double b = spec_.as<RadialOU>().rate;
      decay_ = std::exp(-2.0 * b * dt);
      rho_ = std::expm1(2.0 * b * dt) / (2.0 * b);
      break;
    }
    case ProcessKind::kComplexOU: {
      const auto& p = spec_.as<ComplexOU>();
      decay_ = std::exp(-p.rate * dt);
      sd_ = std::sqrt(-std::expm1(-2.0 * p.rate * dt) / (2.0 * p.rate));
      rotation_ = std::polar(decay_, -p.rotation * dt);
      break;
    }
    default:
      break;
  }
}

State PathWalker::exact_step(State x, Rng& rng) {
  const double r = x.real();
  switch (spec_.kind()) {
    case ProcessKind::kOU:
      return {decay_ * r + sd_ * rng.normal(), 0.0};
    case ProcessKind::kBMDrift:
      return {r - spec_.as<BMDrift>().drift * dt_ + sqrt_dt_ * rng.normal(), 0.0};
    case ProcessKind::kCIR:
      return {decay_ * besq_draw(cir_besq_dim(spec_.as<CIR>()), r, rho_, rng), 0.0};
    case ProcessKind::kBESQ:
      return {besq_draw(spec_.as<BESQ>().dim, r, dt_, rng), 0.0};
    case ProcessKind::kBessel:
      return {std::sqrt(besq_draw(spec_.as<Bessel>().dim, r * r, dt_, rng)), 0.0};
    case ProcessKind::kRadialOU:
      return {std::sqrt(decay_ * besq_draw(spec_.as<RadialOU>().dim, r * r, rho_, rng)), 0.0};
    case ProcessKind::kComplexOU: {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      return rotation_ * x + sd_ * State(z1, z2);
    }
    case ProcessKind::kComplexBM: {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      return x + sqrt_dt_ * State(z1, z2);
    }
    case ProcessKind::kReflectedBMDrift:
      break;
  }
  return euler_step(spec_, x, dt_, rng);
}

void PathWalker::step(double dt, Rng& rng) {
  prepare(dt);
  prev_state_ = state_;
  state_ = euler_ ? euler_step(spec_, state_, dt, rng) : exact_step(state_, rng);
  time_ += dt;
  value_ = monitored(state_, time_);
  last_step_max_ = value_;
  if (bridge_) {
    // Extremes of a Brownian bridge with unit diffusion between the endpoints.
    const double x = prev_state_.real();
    const double y = state_.real();
    const double d2 = (y - x) * (y - x);
    const double up = 0.5 * (x + y + std::sqrt(d2 - 2.0 * dt * std::log(rng.uniform())));
    const double down = 0.5 * (x + y - std::sqrt(d2 - 2.0 * dt * std::log(rng.uniform())));
    last_step_max_ = monitor_ == Monitor::kUpper ? std::max(last_step_max_, up)
                                                 : std::max({last_step_max_, up, -down});
  }
  running_max_ = std::max(running_max_, last_step_max_);
}

double PathWalker::bridge_midpoint(Rng& rng) const {
  const double half = 0.5 * std::sqrt(dt_) * local_sigma(prev_state_);
  State mid = 0.5 * (prev_state_ + state_);
  const double z1 = rng.normal();
  if (spec_.is_complex()) {
    const double z2 = rng.normal();
    mid += half * State(z1, z2);
  } else {
    mid += State(half * z1, 0.0);
  }
  return monitored(mid, time_ - 0.5 * dt_);
}

HitOutcome run_until_hit(PathWalker& walker, double level, double cap, double dt, Rng& rng,
                         std::optional<double> horizon) {
  const double stop = horizon ? std::min(cap, *horizon) : cap;
  if (walker.value() >= level) return {walker.time(), level, true, false};
  while (walker.time() < stop) {
    double h = std::min(dt, stop - walker.time());
    if (stop - walker.time() - h < 1e-12 * stop) h = stop - walker.time();
    const double t0 = walker.time();
    walker.step(h, rng);
    if (walker.last_step_max() >= level) {
      double when = t0 + h;
      if (walker.value() < level) {
        when = t0 + 0.5 * h;  // crossing seen by the bridge correction only
      } else if (walker.uses_euler() && walker.bridge_midpoint(rng) >= level) {
        when = t0 + 0.5 * h;
      }
      return {when, level, true, false};
    }
  }
  const bool censored = !horizon || cap < *horizon;
  return {walker.time(), walker.running_max(), false, censored};
}

PathSkeleton simulate_path(const ProcessSpec& spec, const StoppingRule& rule,
                           const GridPolicy& grid, Rng& rng) {
  validate(rule);
  PathSkeleton path;
  PathWalker walker(spec, grid);
  path.used_euler = walker.uses_euler();
  auto record = [&] {
    path.times.push_back(walker.time());
    path.values.push_back(walker.value());
    path.running_max.push_back(walker.running_max());
  };
  record();

  if (const auto* fixed = std::get_if<FixedTime>(&rule)) {
    const double horizon[] = {fixed->horizon};
    const TimeGrid tg(horizon, grid);
    for (const auto& seg : tg.segments()) {
      for (std::size_t k = 0; k < seg.count; ++k) {
        walker.step(seg.dt, rng);
        record();
      }
    }
    return path;
  }

  double level = 0.0, cap = 0.0;
  std::optional<double> horizon;
  if (const auto* hit = std::get_if<HittingLevel>(&rule)) {
    level = hit->level;
    cap = hit->cap;
  } else {
    const auto& mixed = std::get<FixedTimeMinHit>(rule);
    level = mixed.level;
    cap = mixed.horizon;
    horizon = mixed.horizon;
  }
  const double dt = base_step(grid, cap);
  HitRecord rec;
  rec.level = level;
  if (walker.value() >= level) {
    rec.index = 0;
    path.hit = rec;
    return path;
  }
  const double stop = cap;
  while (walker.time() < stop) {
    double h = std::min(dt, stop - walker.time());
    if (stop - walker.time() - h < 1e-12 * stop) h = stop - walker.time();
    const double t0 = walker.time();
    walker.step(h, rng);
    record();
    if (walker.last_step_max() >= level) {
      rec.index = path.times.size() - 1;
      rec.time = t0 + h;
      if (walker.value() < level) {
        rec.time = t0 + 0.5 * h;
      } else if (walker.uses_euler() && walker.bridge_midpoint(rng) >= level) {
        rec.time = t0 + 0.5 * h;
      }
      path.hit = rec;
      return path;
    }
  }
  rec.time = walker.time();
  rec.censored = !horizon.has_value();
  path.censored = rec.censored;
  path.hit = rec;
  return path;
}

}  // namespace maxineq
