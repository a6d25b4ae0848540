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

#include "maxineq/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxineq/analytic.hpp"
#include "maxineq/parallel.hpp"

namespace maxineq {
namespace {

constexpr std::size_t kMinPaths = 1000;

double largest_step(const TimeGrid& tg) {
  double h = 0.0;
  for (const auto& s : tg.segments()) h = std::max(h, s.dt);
  return h;
}

std::string path_name(const McOptions& o, std::size_t i) {
  return "path " + std::to_string(i) + " (seed " + std::to_string(o.seed) + ", stream " +
         std::to_string(o.stream) + ")";
}

// Means of F over rows of a sup sample matrix, column by column.
std::vector<Accumulator> column_moments(std::span<const double> samples, std::size_t columns,
                                        const ModerateFunction& f, const McOptions& o) {
  std::vector<Accumulator> acc(columns);
  const std::size_t rows = columns == 0 ? 0 : samples.size() / columns;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < columns; ++k) {
      const double v = f(samples[i * columns + k]);
      if (!std::isfinite(v))
        throw EstimationError("non-finite F(X*) at " + path_name(o, i));
      acc[k].add(v);
    }
  }
  return acc;
}

McOptions pilot_options(const McOptions& o) {
  McOptions p = o;
  p.stream = streams::kPilot;
  return p;
}

std::size_t pilot_size(std::size_t n) { return std::max<std::size_t>(100, n / 10); }

}  // namespace

std::vector<double> sup_samples(const ProcessSpec& spec, std::span<const double> times,
                                std::size_t n_paths, const GridPolicy& grid,
                                const McOptions& options) {
  const TimeGrid tg(times, grid);
  const std::size_t m = times.size();
  std::vector<double> out(n_paths * m);
  for_chunks(n_paths, options.chunk, options.workers, [&](std::size_t begin, std::size_t end) {
    PathWalker walker(spec, grid);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(options.seed, options.stream, i);
      walker.reset();
      for (std::size_t k = 0; k < m; ++k) {
        const auto& seg = tg.segments()[k];
        for (std::size_t s = 0; s < seg.count; ++s) walker.step(seg.dt, rng);
        out[i * m + k] = walker.running_max();
      }
    }
  });
  return out;
}

std::vector<HitOutcome> hitting_samples(const ProcessSpec& spec, double level, double cap,
                                        std::size_t n_paths, const GridPolicy& grid,
                                        const McOptions& options, std::optional<double> horizon) {
  if (!(level > 0.0)) throw ParameterError("hitting level must be > 0");
  if (!(cap > 0.0) || !std::isfinite(cap)) throw ParameterError("hitting cap must be finite");
  const double dt = base_step(grid, horizon ? std::min(cap, *horizon) : cap);
  std::vector<HitOutcome> out(n_paths);
  for_chunks(n_paths, options.chunk, options.workers, [&](std::size_t begin, std::size_t end) {
    PathWalker walker(spec, grid);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(options.seed, options.stream, i);
      walker.reset();
      out[i] = run_until_hit(walker, level, cap, dt, rng, horizon);
    }
  });
  return out;
}

MaximalEstimate estimate_sup_expectation(const ProcessSpec& spec, const ModerateFunction& f,
                                         const StoppingRule& rule, std::size_t n_paths,
                                         const GridPolicy& grid, const McOptions& options,
                                         bool pilot) {
  if (n_paths < kMinPaths) throw ParameterError("estimate_sup_expectation needs n_paths >= 1000");
  const GrowthFunction g(spec, grid.monitor);
  MaximalEstimate est;
  est.n_paths = n_paths;
  est.used_euler = PathWalker(spec, grid).uses_euler();

  if (const auto* fixed = std::get_if<FixedTime>(&rule); fixed && fixed->horizon == 0.0) {
    est.mean = f(observe(spec, spec.x0()));
    return est;
  }
  validate(rule);

  auto fixed_mean = [&](double horizon, std::size_t n, const GridPolicy& gp,
                        const McOptions& o) {
    const double times[] = {horizon};
    return column_moments(sup_samples(spec, times, n, gp, o), 1, f, o)[0];
  };
  auto hitting_mean = [&](double level, double cap, std::optional<double> horizon, std::size_t n,
                          const GridPolicy& gp, const McOptions& o, Accumulator* growth,
                          std::size_t* censored) {
    const auto hits = hitting_samples(spec, level, cap, n, gp, o, horizon);
    Accumulator acc;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const double v = f(hits[i].running_max);
      if (!std::isfinite(v)) throw EstimationError("non-finite F(X*) at " + path_name(o, i));
      acc.add(v);
      if (growth) growth->add(f(g(hits[i].time)));
      if (censored && hits[i].censored) ++*censored;
    }
    return acc;
  };

  if (const auto* fixed = std::get_if<FixedTime>(&rule)) {
    const double times[] = {fixed->horizon};
    const TimeGrid tg(times, grid);
    est.step = largest_step(tg);
    est.steps = tg.total_steps();
    const auto acc = fixed_mean(fixed->horizon, n_paths, grid, options);
    est.mean = acc.mean();
    est.standard_error = acc.standard_error();
    est.growth_mean = f(g(fixed->horizon));
    if (est.used_euler || pilot) {
      const auto po = pilot_options(options);
      const std::size_t np = pilot_size(n_paths);
      est.refinement_delta = std::abs(fixed_mean(fixed->horizon, np, grid, po).mean() -
                                      fixed_mean(fixed->horizon, np, refine(grid), po).mean());
    }
    return est;
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
  est.step = base_step(grid, cap);
  Accumulator growth;
  std::size_t censored = 0;
  const auto acc = hitting_mean(level, cap, horizon, n_paths, grid, options, &growth, &censored);
  est.mean = acc.mean();
  est.standard_error = acc.standard_error();
  est.growth_mean = growth.mean();
  est.growth_standard_error = growth.standard_error();
  est.censored_fraction = static_cast<double>(censored) / static_cast<double>(n_paths);
  if (est.used_euler || pilot) {
    const auto po = pilot_options(options);
    const std::size_t np = pilot_size(n_paths);
    est.refinement_delta =
        std::abs(hitting_mean(level, cap, horizon, np, grid, po, nullptr, nullptr).mean() -
                 hitting_mean(level, cap, horizon, np, refine(grid), po, nullptr, nullptr).mean());
  }
  return est;
}

Proportion estimate_tail(const ProcessSpec& spec, State x0, double t, double level,
                         std::size_t n_paths, const GridPolicy& grid, const McOptions& options,
                         double z) {
  if (!(level > 0.0)) throw ParameterError("tail level must be > 0");
  const ProcessSpec started = spec.with_start(x0);
  const auto hits = hitting_samples(started, level, t, n_paths, grid, options, t);
  std::size_t count = 0;
  for (const auto& h : hits) count += h.hit ? 1 : 0;
  return wilson(count, n_paths, z);
}

void summarize(RatioEnvelope& e) {
  if (e.points.empty()) {
    e.min_ratio = e.max_ratio = e.spread = 0.0;
    return;
  }
  e.min_ratio = std::numeric_limits<double>::infinity();
  e.max_ratio = 0.0;
  for (const auto& p : e.points) {
    e.min_ratio = std::min(e.min_ratio, p.ratio);
    e.max_ratio = std::max(e.max_ratio, p.ratio);
  }
  e.spread = e.min_ratio > 0.0 ? e.max_ratio / e.min_ratio
                               : std::numeric_limits<double>::infinity();
}

RatioEnvelope envelope_from_samples(std::span<const double> samples,
                                    std::span<const double> times,
                                    const std::function<double(double)>& growth,
                                    const ModerateFunction& f, const McOptions& options,
                                    double z) {
  RatioEnvelope env;
  env.moderate = f.descriptor();
  env.z = z;
  const auto acc = column_moments(samples, times.size(), f, options);
  env.n_paths = times.empty() ? 0 : samples.size() / times.size();
  for (std::size_t k = 0; k < times.size(); ++k) {
    EnvelopePoint p;
    p.time = times[k];
    p.mean = acc[k].mean();
    p.standard_error = acc[k].standard_error();
    p.growth = f(growth(times[k]));
    p.ratio = p.growth > 0.0 ? p.mean / p.growth : std::numeric_limits<double>::infinity();
    if (p.mean > 0.0) {
      const double w = z * p.standard_error / p.mean;
      p.lower = p.ratio * std::exp(-w);
      p.upper = p.ratio * std::exp(w);
    } else {
      p.lower = p.upper = p.ratio;
    }
    env.points.push_back(p);
  }
  summarize(env);
  return env;
}

std::vector<RatioEnvelope> ratio_envelopes(const ProcessSpec& spec,
                                           std::span<const ModerateFunction> fs,
                                           std::span<const double> times, std::size_t n_paths,
                                           const GridPolicy& grid, const McOptions& options,
                                           double z, bool pilot) {
  const GrowthFunction g(spec, grid.monitor);
  const auto g_of = [&g](double t) { return g(t); };
  const TimeGrid tg(times, grid);
  const auto samples = sup_samples(spec, times, n_paths, grid, options);
  const bool want_pilot = pilot || PathWalker(spec, grid).uses_euler();
  std::vector<double> coarse, fine;
  std::size_t np = 0;
  if (want_pilot) {
    np = pilot_size(n_paths);
    coarse = sup_samples(spec, times, np, grid, pilot_options(options));
    fine = sup_samples(spec, times, np, refine(grid), pilot_options(options));
  }

  std::vector<RatioEnvelope> out;
  for (const auto& f : fs) {
    auto env = envelope_from_samples(samples, times, g_of, f, options, z);
    env.n_paths = n_paths;
    env.steps = tg.total_steps();
    if (want_pilot) {
      const auto a = column_moments(coarse, times.size(), f, options);
      const auto b = column_moments(fine, times.size(), f, options);
      double worst = 0.0;
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (b[k].mean() > 0.0)
          worst = std::max(worst, std::abs(a[k].mean() - b[k].mean()) / b[k].mean());
      }
      env.refinement_delta = worst;
    }
    out.push_back(std::move(env));
  }
  return out;
}

RatioEnvelope ratio_envelope(const ProcessSpec& spec, const ModerateFunction& f,
                             std::span<const double> times, std::size_t n_paths,
                             const GridPolicy& grid, const McOptions& options, double z) {
  const ModerateFunction fs[] = {f};
  return ratio_envelopes(spec, fs, times, n_paths, grid, options, z).front();
}

}  // namespace maxineq
