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

#include "maxineq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maxineq/analytic.hpp"
#include "maxineq/parallel.hpp"
#include "maxineq/stats.hpp"

namespace maxineq {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

McOptions with_stream(const McOptions& o, std::uint64_t stream) {
  McOptions r = o;
  r.stream = stream;
  return r;
}

void require_increasing(std::span<const double> xs, const char* what) {
  if (xs.empty()) throw ParameterError(std::string(what) + " must not be empty");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !std::isfinite(xs[i]) || (i > 0 && !(xs[i] > xs[i - 1])))
      throw ParameterError(std::string(what) + " must be finite, positive and increasing");
  }
}

Json proportion_json(const Proportion& p) {
  return {{"hits", p.hits}, {"trials", p.trials}, {"estimate", p.estimate},
          {"lower", p.lower}, {"upper", p.upper}};
}

// Marks the report failed (or inconclusive) unless it already carries a
// verdict at least as severe; the first reason at a severity wins.
void escalate(CheckReport& r, Verdict v, const std::string& reason) {
  if (static_cast<int>(v) > static_cast<int>(r.verdict)) {
    r.verdict = v;
    r.reason = reason;
  }
}

Json descriptors(std::span<const ModerateFunction> fs) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(f.descriptor());
  return out;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kInconclusive:
      return "inconclusive";
    case Verdict::kFail:
      return "fail";
  }
  return "fail";
}

Verdict worst(Verdict a, Verdict b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

Json to_json(const CheckReport& r) {
  Json j;
  j["name"] = r.name;
  j["parameters"] = r.parameters;
  j["verdict"] = std::string(verdict_name(r.verdict));
  j["reason"] = r.reason;
  j["witness"] = r.witness;
  j["seeds"] = r.seeds;
  return j;
}

Json process_json(const ProcessSpec& spec) {
  Json j;
  j["kind"] = std::string(kind_name(spec.kind()));
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OU>) {
          j["rate"] = p.rate;
        } else if constexpr (std::is_same_v<T, BMDrift> || std::is_same_v<T, ReflectedBMDrift>) {
          j["drift"] = p.drift;
        } else if constexpr (std::is_same_v<T, CIR>) {
          j["level"] = p.level;
          j["rate"] = p.rate;
          j["vol"] = p.vol;
        } else if constexpr (std::is_same_v<T, BESQ> || std::is_same_v<T, Bessel>) {
          j["dim"] = p.dim;
        } else if constexpr (std::is_same_v<T, RadialOU>) {
          j["dim"] = p.dim;
          j["rate"] = p.rate;
        } else if constexpr (std::is_same_v<T, ComplexOU>) {
          j["rate"] = p.rate;
          j["rotation"] = p.rotation;
        }
      },
      spec.params());
  if (spec.is_complex())
    j["x0"] = {spec.x0().real(), spec.x0().imag()};
  else
    j["x0"] = spec.x0().real();
  return j;
}

CheckReport combine_reports(std::string name, std::vector<CheckReport> parts) {
  CheckReport out;
  out.name = std::move(name);
  Json list = Json::array();
  for (auto& p : parts) {
    if (p.verdict != Verdict::kPass) escalate(out, p.verdict, p.name + ": " + p.reason);
    for (auto s : p.seeds) {
      if (std::find(out.seeds.begin(), out.seeds.end(), s) == out.seeds.end())
        out.seeds.push_back(s);
    }
    list.push_back(to_json(p));
  }
  out.witness["parts"] = std::move(list);
  return out;
}

// ---------------------------------------------------------------------------

ControllabilityConstants default_controllability(const ProcessSpec& spec) {
  switch (spec.kind()) {
    case ProcessKind::kOU:
      return {2.0, 1.0, 1.0};
    case ProcessKind::kBESQ: {
      const double e = std::ceil(1.0 / spec.as<BESQ>().dim);
      return {4.0, std::exp2(-e), std::exp2(e)};
    }
    case ProcessKind::kReflectedBMDrift:
      return {2.0, 1.0, 2.0};
    default:
      throw ParameterError("no default controllability constants for " +
                           std::string(kind_name(spec.kind())));
  }
}

CheckReport controllability_check(const ProcessSpec& spec, const ControllabilityConstants& k,
                                  const ControllabilityOptions& o) {
  if (!(k.beta > 1.0)) throw ParameterError("controllability needs beta > 1");
  if (!(k.gamma > 0.0) || !(k.C > 0.0))
    throw ParameterError("controllability needs gamma > 0 and C > 0");
  require_increasing(o.times, "controllability times");
  require_increasing(o.levels, "controllability levels");

  CheckReport r;
  r.name = "controllability";
  r.parameters = {{"process", process_json(spec)},
                  {"beta", k.beta},
                  {"gamma", k.gamma},
                  {"C", k.C},
                  {"times", o.times},
                  {"levels", o.levels},
                  {"n_paths", o.n_paths},
                  {"ci_multiplier", o.ci_multiplier}};
  r.seeds = {o.mc.seed};

  const std::size_t m = o.times.size();
  const ProcessSpec origin = spec.with_start({0.0, 0.0});
  const auto base =
      sup_samples(origin, o.times, o.n_paths, o.grid, with_stream(o.mc, streams::kPaths));
  const double z = o.ci_multiplier;

  auto count_at = [&](const std::vector<double>& s, std::size_t col, double level) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < o.n_paths; ++i) c += s[i * m + col] >= level ? 1 : 0;
    return c;
  };

  const bool both_signs = !spec.is_nonnegative() && !spec.is_complex();
  Json cells = Json::array();
  std::size_t vacuous = 0, unresolved = 0;
  for (std::size_t j = 0; j < o.levels.size(); ++j) {
    const double lambda = o.levels[j];
    std::vector<double> signs{1.0};
    if (both_signs) signs.push_back(-1.0);
    for (double sign : signs) {
      const std::uint64_t stream = sign > 0.0 ? streams::kStartPlus + j : streams::kStartMinus + j;
      const auto started = sup_samples(spec.with_start({sign * lambda, 0.0}), o.times, o.n_paths,
                                       o.grid, with_stream(o.mc, stream));
      for (std::size_t t = 0; t < m; ++t) {
        const auto left = wilson(count_at(started, t, k.beta * lambda), o.n_paths, z);
        const auto right = wilson(count_at(base, t, k.gamma * lambda), o.n_paths, z);
        std::string status = "ok";
        if (left.lower > k.C * right.upper) {
          status = "violation";
          escalate(r, Verdict::kFail,
                   "P_x(X* >= " + fmt(k.beta * lambda) + ") lower bound " + fmt(left.lower) +
                       " exceeds C * P_0 upper bound " + fmt(k.C * right.upper) + " at t=" +
                       fmt(o.times[t]) + ", x=" + fmt(sign * lambda));
        } else if (left.hits == 0 && right.hits == 0) {
          status = "vacuous";
          ++vacuous;
        } else if (right.hits == 0) {
          status = "unresolved";
          ++unresolved;
        }
        cells.push_back({{"t", o.times[t]},
                         {"lambda", lambda},
                         {"x", sign * lambda},
                         {"left", proportion_json(left)},
                         {"right", proportion_json(right)},
                         {"bound", k.C * right.upper},
                         {"status", status}});
      }
    }
  }
  if (unresolved > 0)
    escalate(r, Verdict::kInconclusive,
             std::to_string(unresolved) +
                 " cells have a zero-count right-hand tail with n_paths=" +
                 std::to_string(o.n_paths));
  r.witness = {{"cells", std::move(cells)}, {"vacuous_cells", vacuous},
               {"unresolved_cells", unresolved}};
  return r;
}

// ---------------------------------------------------------------------------

CheckReport good_lambda_check(std::span<const double> x, std::span<const double> y,
                              const GoodLambdaOptions& o) {
  if (x.size() != y.size()) throw ParameterError("good-lambda samples must be paired");
  if (!(o.beta > 1.0)) throw ParameterError("good-lambda needs beta > 1");
  if (o.deltas.empty()) throw ParameterError("good-lambda needs at least one delta");
  if (!o.analytic.empty() && o.analytic.size() != o.deltas.size())
    throw ParameterError("analytic phi must match the delta list");
  require_increasing(o.lambdas, "good-lambda levels");
  for (std::size_t i = 1; i < o.deltas.size(); ++i) {
    if (!(o.deltas[i] < o.deltas[i - 1]) || !(o.deltas[i] > 0.0))
      throw ParameterError("deltas must be positive and decreasing");
  }

  CheckReport r;
  r.name = "good_lambda";
  r.parameters = {{"beta", o.beta},       {"deltas", o.deltas},
                  {"lambdas", o.lambdas}, {"n_samples", x.size()},
                  {"analytic_phi", o.analytic}, {"ci_multiplier", o.ci_multiplier}};

  std::vector<std::size_t> den(o.lambdas.size(), 0);
  for (std::size_t l = 0; l < o.lambdas.size(); ++l) {
    for (double v : x) den[l] += v >= o.lambdas[l] ? 1 : 0;
  }
  std::size_t excluded = 0;
  for (auto d : den) excluded += d == 0 ? 1 : 0;
  if (excluded == den.size()) {
    escalate(r, Verdict::kInconclusive, "every lambda cell has an empty denominator");
    r.witness = {{"excluded_lambdas", excluded}};
    return r;
  }

  std::vector<double> phi_hat;
  Json profile = Json::array();
  for (std::size_t d = 0; d < o.deltas.size(); ++d) {
    const double delta = o.deltas[d];
    double best = 0.0, best_lambda = 0.0;
    double worst_lower = 0.0, worst_lambda = 0.0;
    for (std::size_t l = 0; l < o.lambdas.size(); ++l) {
      if (den[l] == 0) continue;
      const double lambda = o.lambdas[l];
      std::size_t joint = 0;
      for (std::size_t i = 0; i < x.size(); ++i)
        joint += (x[i] >= o.beta * lambda && y[i] < delta * lambda) ? 1 : 0;
      const double ratio = static_cast<double>(joint) / static_cast<double>(den[l]);
      if (ratio > best) {
        best = ratio;
        best_lambda = lambda;
      }
      const auto w = wilson(joint, den[l], o.ci_multiplier);
      if (w.lower > worst_lower) {
        worst_lower = w.lower;
        worst_lambda = lambda;
      }
    }
    phi_hat.push_back(best);
    Json entry = {{"delta", delta},
                  {"phi_hat", best},
                  {"argmax", best_lambda},
                  {"max_lower_bound", worst_lower}};
    if (!o.analytic.empty()) {
      entry["analytic"] = o.analytic[d];
      if (worst_lower > o.analytic[d])
        escalate(r, Verdict::kFail,
                 "phi_hat lower bound " + fmt(worst_lower) + " exceeds analytic phi " +
                     fmt(o.analytic[d]) + " at delta=" + fmt(delta) +
                     ", lambda=" + fmt(worst_lambda));
    }
    profile.push_back(std::move(entry));
  }
  for (std::size_t d = 1; d < phi_hat.size(); ++d) {
    if (phi_hat[d - 1] > 0.0 && !(phi_hat[d] < phi_hat[d - 1]))
      escalate(r, Verdict::kFail,
               "phi_hat did not decrease from delta=" + fmt(o.deltas[d - 1]) + " to delta=" +
                   fmt(o.deltas[d]) + " (" + fmt(phi_hat[d]) + ")");
  }
  r.witness = {{"profile", std::move(profile)}, {"excluded_lambdas", excluded}};
  return r;
}

HittingPairs hitting_pairs(const ProcessSpec& spec, std::span<const double> levels, double cap,
                           std::size_t n_paths, const GridPolicy& grid, const McOptions& o) {
  if (levels.empty()) throw ParameterError("hitting pairs need at least one level");
  for (double l : levels) {
    if (!(l > 0.0)) throw ParameterError("hitting levels must be > 0");
  }
  if (!(cap > 0.0) || !std::isfinite(cap)) throw ParameterError("hitting cap must be finite");
  const GrowthFunction g(spec, grid.monitor);
  const double dt = base_step(grid, cap);
  HittingPairs out;
  out.growth.resize(n_paths);
  out.maximum.resize(n_paths);
  out.levels.resize(n_paths);
  std::vector<char> censored(n_paths, 0);
  for_chunks(n_paths, o.chunk, o.workers, [&](std::size_t begin, std::size_t end) {
    PathWalker walker(spec, grid);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(o.seed, o.stream, i);
      walker.reset();
      const double level = levels[i % levels.size()];
      const auto h = run_until_hit(walker, level, cap, dt, rng);
      out.levels[i] = level;
      out.maximum[i] = h.running_max;
      out.growth[i] = g(h.time);
      censored[i] = h.censored ? 1 : 0;
    }
  });
  std::size_t c = 0;
  for (char v : censored) c += v;
  out.censored_fraction = n_paths ? static_cast<double>(c) / static_cast<double>(n_paths) : 0.0;
  return out;
}

std::optional<double> analytic_phi(const ProcessSpec& spec, double delta) {
  switch (spec.kind()) {
    case ProcessKind::kOU:
      return spec.as<OU>().rate * delta * delta;
    case ProcessKind::kBMDrift:
      return delta;
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

Json envelope_json(const RatioEnvelope& e) {
  Json points = Json::array();
  for (const auto& p : e.points) {
    points.push_back({{"time", p.time},
                      {"mean", p.mean},
                      {"standard_error", p.standard_error},
                      {"growth", p.growth},
                      {"ratio", p.ratio},
                      {"lower", p.lower},
                      {"upper", p.upper}});
  }
  Json j = {{"moderate", e.moderate},   {"points", std::move(points)},
            {"min_ratio", e.min_ratio}, {"max_ratio", e.max_ratio},
            {"spread", e.spread},       {"n_paths", e.n_paths},
            {"steps", e.steps},         {"z", e.z}};
  if (e.refinement_delta) j["refinement_delta"] = *e.refinement_delta;
  return j;
}

namespace {

void judge_envelopes(CheckReport& r, const std::vector<RatioEnvelope>& envs,
                     const EnvelopeLimits& limits) {
  Json list = Json::array();
  for (std::size_t i = 0; i < envs.size(); ++i) {
    const auto& e = envs[i];
    const double limit = limits.spread[i];
    if (!std::isfinite(e.spread) || e.spread > limit)
      escalate(r, Verdict::kFail,
               "spread " + fmt(e.spread) + " exceeds limit " + fmt(limit) + " for " + e.moderate);
    if (!(e.min_ratio >= limits.min_ratio))
      escalate(r, Verdict::kFail,
               "min ratio " + fmt(e.min_ratio) + " below " + fmt(limits.min_ratio) + " for " +
                   e.moderate);
    Json j = envelope_json(e);
    j["spread_limit"] = limit;
    list.push_back(std::move(j));
  }
  r.witness["envelopes"] = std::move(list);
}

CheckReport envelope_report(const ProcessSpec& spec, std::span<const ModerateFunction> fs,
                            const EnvelopeLimits& limits, const TwoSidedOptions& o,
                            const std::string& formula) {
  if (limits.spread.size() != fs.size())
    throw ParameterError("one spread limit is needed per moderate function");
  CheckReport r;
  r.name = "two_sided_envelope";
  r.parameters = {{"process", process_json(spec)},
                  {"moderate", descriptors(fs)},
                  {"times", o.times},
                  {"n_paths", o.n_paths},
                  {"spread_limits", limits.spread},
                  {"min_ratio", limits.min_ratio},
                  {"growth", formula},
                  {"monitor", std::string(monitor_name(o.grid.monitor))}};
  r.seeds = {o.mc.seed};
  return r;
}

}  // namespace

CheckReport two_sided_from_samples(const ProcessSpec& spec, std::span<const double> samples,
                                   std::span<const double> times,
                                   std::span<const ModerateFunction> fs,
                                   const EnvelopeLimits& limits, const TwoSidedOptions& o,
                                   const std::optional<GrowthOverride>& growth) {
  const GrowthFunction own(spec, o.grid.monitor);
  std::function<double(double)> g = [&own](double t) { return own(t); };
  std::string formula = own.formula();
  if (growth) {
    g = growth->g;
    formula = growth->formula;
  }
  CheckReport r = envelope_report(spec, fs, limits, o, formula);
  const TimeGrid tg(times, o.grid);
  std::vector<RatioEnvelope> envs;
  for (const auto& f : fs) {
    auto e = envelope_from_samples(samples, times, g, f, o.mc, o.z);
    e.steps = tg.total_steps();
    envs.push_back(std::move(e));
  }
  judge_envelopes(r, envs, limits);
  return r;
}

CheckReport hitting_spot_check(const ProcessSpec& spec, std::span<const ModerateFunction> fs,
                               const TwoSidedOptions& o) {
  CheckReport r;
  r.name = "hitting_spot_check";
  r.parameters = {{"process", process_json(spec)}, {"moderate", descriptors(fs)},
                  {"levels", o.spot_levels},       {"cap", o.spot_cap},
                  {"n_paths", o.spot_paths},       {"max_censored", o.max_censored}};
  r.seeds = {o.mc.seed};
  const GrowthFunction g(spec, o.grid.monitor);
  Json rows = Json::array();
  for (std::size_t l = 0; l < o.spot_levels.size(); ++l) {
    const double level = o.spot_levels[l];
    const auto hits = hitting_samples(spec, level, o.spot_cap, o.spot_paths, o.grid,
                                      with_stream(o.mc, streams::kHitting + 8 * l));
    std::size_t censored = 0;
    for (const auto& h : hits) censored += h.censored ? 1 : 0;
    const double frac = static_cast<double>(censored) / static_cast<double>(hits.size());
    if (frac > o.max_censored)
      escalate(r, Verdict::kInconclusive,
               "censored fraction " + fmt(frac) + " above " + fmt(o.max_censored) +
                   " at level " + fmt(level) + " with cap " + fmt(o.spot_cap));
    Json per_f = Json::array();
    for (const auto& f : fs) {
      Accumulator mx, gr;
      for (const auto& h : hits) {
        mx.add(f(h.running_max));
        gr.add(f(g(h.time)));
      }
      const double ratio = gr.mean() > 0.0 ? mx.mean() / gr.mean()
                                           : std::numeric_limits<double>::infinity();
      if (!std::isfinite(ratio) || ratio < 1e-3)
        escalate(r, Verdict::kFail,
                 "hitting ratio " + fmt(ratio) + " at level " + fmt(level) + " for " +
                     f.descriptor());
      per_f.push_back({{"moderate", f.descriptor()},
                       {"mean", mx.mean()},
                       {"standard_error", mx.standard_error()},
                       {"growth_mean", gr.mean()},
                       {"growth_standard_error", gr.standard_error()},
                       {"ratio", ratio}});
    }
    rows.push_back({{"level", level}, {"censored_fraction", frac}, {"ratios", std::move(per_f)}});
  }
  r.witness = {{"levels", std::move(rows)}};
  return r;
}

CheckReport two_sided_check(const ProcessSpec& spec, std::span<const ModerateFunction> fs,
                            const EnvelopeLimits& limits, const TwoSidedOptions& o,
                            const std::optional<GrowthOverride>& growth) {
  require_increasing(o.times, "envelope times");
  CheckReport env;
  if (growth) {
    const auto samples = sup_samples(spec, o.times, o.n_paths, o.grid, o.mc);
    env = two_sided_from_samples(spec, samples, o.times, fs, limits, o, growth);
  } else {
    const GrowthFunction g(spec, o.grid.monitor);
    env = envelope_report(spec, fs, limits, o, g.formula());
    const auto envs = ratio_envelopes(spec, fs, o.times, o.n_paths, o.grid, o.mc, o.z, o.pilot);
    judge_envelopes(env, envs, limits);
  }
  if (o.spot_levels.empty()) return env;
  auto spot = hitting_spot_check(spec, fs, o);
  return combine_reports("two_sided", {std::move(env), std::move(spot)});
}

// ---------------------------------------------------------------------------

double lp_bound(double dim, double p, double t) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("the Lp bound needs 0 < p < 1");
  return std::pow(dim, p) * (2.0 - p) / (1.0 - p) * std::pow(t, p);
}

CheckReport lp_bound_check(double dim, const LpOptions& o) {
  require_increasing(o.times, "Lp times");
  if (o.exponents.empty()) throw ParameterError("Lp check needs at least one exponent");
  for (double p : o.exponents) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("the Lp bound needs 0 < p < 1");
  }
  const ProcessSpec spec{BESQ{dim}};
  CheckReport r;
  r.name = "lp_bound";
  r.parameters = {{"process", process_json(spec)}, {"exponents", o.exponents},
                  {"times", o.times},              {"n_paths", o.n_paths},
                  {"se_multiplier", o.se_multiplier}};
  r.seeds = {o.mc.seed};
  const auto samples = sup_samples(spec, o.times, o.n_paths, o.grid, o.mc);
  const std::size_t m = o.times.size();
  Json rows = Json::array();
  for (double p : o.exponents) {
    for (std::size_t k = 0; k < m; ++k) {
      Accumulator acc;
      for (std::size_t i = 0; i < o.n_paths; ++i) acc.add(std::pow(samples[i * m + k], p));
      const double bound = lp_bound(dim, p, o.times[k]);
      const double lower = acc.mean() - o.se_multiplier * acc.standard_error();
      if (!(lower <= bound))
        escalate(r, Verdict::kFail,
                 "estimate " + fmt(acc.mean()) + " - " + fmt(o.se_multiplier) + " SE exceeds bound " +
                     fmt(bound) + " at p=" + fmt(p) + ", t=" + fmt(o.times[k]));
      rows.push_back({{"p", p},
                      {"t", o.times[k]},
                      {"mean", acc.mean()},
                      {"standard_error", acc.standard_error()},
                      {"bound", bound}});
    }
  }
  r.witness = {{"points", std::move(rows)}};
  return r;
}

// ---------------------------------------------------------------------------

CheckReport distribution_equiv(const SamplePair& pair, double ks_level) {
  if (pair.a.size() != pair.b.size())
    throw ParameterError("distribution_equiv needs equal sample sizes, got " +
                         std::to_string(pair.a.size()) + " and " + std::to_string(pair.b.size()));
  if (pair.a.empty()) throw ParameterError("distribution_equiv needs samples");
  if (!(ks_level > 0.0 && ks_level < 1.0)) throw ParameterError("KS level must be in (0, 1)");
  CheckReport r;
  r.name = "distribution_equiv";
  r.parameters = {{"pair", pair.label}, {"n", pair.a.size()}, {"ks_level", ks_level}};
  const double d = ks_statistic(pair.a, pair.b);
  const double crit = ks_critical(ks_level, pair.a.size(), pair.b.size());
  if (!(d <= crit))
    escalate(r, Verdict::kFail, "KS statistic " + fmt(d) + " above critical " + fmt(crit));
  r.witness = {{"ks_statistic", d}, {"critical_value", crit}};
  return r;
}

namespace {

template <typename Draw>
std::vector<double> draws(std::size_t n, std::uint64_t seed, std::uint64_t stream, Draw&& draw) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, stream, i);
    out[i] = draw(rng);
  }
  return out;
}

std::string label(const std::string& name, double t) { return name + " at t=" + fmt(t); }

}  // namespace

SamplePair complex_ou_vs_cir(double rate, double rotation, double t, std::size_t n,
                             std::uint64_t seed) {
  const ProcessSpec z{ComplexOU{rate, rotation}};
  const ProcessSpec c{CIR{2.0, -2.0 * rate, 2.0}};
  SamplePair p;
  p.label = label("|ComplexOU(" + fmt(rate) + "," + fmt(rotation) + ")|^2 vs CIR(2," +
                      fmt(-2.0 * rate) + ",2)",
                  t);
  p.a = draws(n, seed, streams::kPairA,
              [&](Rng& rng) { return std::norm(sample_transition(z, {0.0, 0.0}, t, rng).state); });
  p.b = draws(n, seed, streams::kPairB,
              [&](Rng& rng) { return sample_transition(c, {0.0, 0.0}, t, rng).state.real(); });
  return p;
}

SamplePair cir_vs_time_changed_besq(const CIR& params, double t, std::size_t n,
                                    std::uint64_t seed) {
  const ProcessSpec c{params};
  constexpr int kSubsteps = 16;
  const double clock = params.vol * params.vol * std::expm1(-params.rate * t) / (-4.0 * params.rate);
  const double decay = std::exp(params.rate * t);
  const double dim = cir_besq_dim(params);
  SamplePair p;
  p.label = label("CIR(" + fmt(params.level) + "," + fmt(params.rate) + "," + fmt(params.vol) +
                      ") vs time-changed BESQ(" + fmt(dim) + ")",
                  t);
  p.a = draws(n, seed, streams::kPairA, [&](Rng& rng) {
    PathWalker w(c, GridPolicy::uniform(kSubsteps));
    w.reset();
    for (int s = 0; s < kSubsteps; ++s) w.step(t / kSubsteps, rng);
    return w.state().real();
  });
  p.b = draws(n, seed, streams::kPairB,
              [&](Rng& rng) { return decay * besq_draw(dim, 0.0, clock, rng); });
  return p;
}

SamplePair besq_additivity(double dim_a, double dim_b, double t, std::size_t n,
                           std::uint64_t seed) {
  SamplePair p;
  p.label = label("BESQ(" + fmt(dim_a) + ")+BESQ(" + fmt(dim_b) + ") vs BESQ(" +
                      fmt(dim_a + dim_b) + ")",
                  t);
  p.a.resize(n);
  p.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, streams::kPairA, i);
    std::tie(p.a[i], p.b[i]) = besq_additivity_pair(dim_a, dim_b, t, rng);
  }
  return p;
}

SamplePair time_changed_complex_bm(double rate, double rotation, double t, std::size_t n,
                                   std::uint64_t seed) {
  const ProcessSpec z{ComplexOU{rate, rotation}};
  const double clock = std::expm1(2.0 * rate * t);
  const double scale = std::exp(-rate * t) / std::sqrt(2.0 * rate);
  SamplePair p;
  p.label = label("time-changed complex BM vs |ComplexOU(" + fmt(rate) + "," + fmt(rotation) + ")|",
                  t);
  p.a = draws(n, seed, streams::kPairA, [&](Rng& rng) {
    const double x = rng.normal();
    const double y = rng.normal();
    return scale * std::sqrt(clock) * std::hypot(x, y);
  });
  p.b = draws(n, seed, streams::kPairB,
              [&](Rng& rng) { return std::abs(sample_transition(z, {0.0, 0.0}, t, rng).state); });
  return p;
}

SamplePair cir_self_pair(const CIR& params, double t, std::size_t n, std::uint64_t seed) {
  const ProcessSpec c{params};
  SamplePair p;
  p.label = label("CIR self-test", t);
  auto draw = [&](Rng& rng) { return sample_transition(c, {0.0, 0.0}, t, rng).state.real(); };
  p.a = draws(n, seed, streams::kPairA, draw);
  p.b = draws(n, seed, streams::kPairB, draw);
  return p;
}

// ---------------------------------------------------------------------------

std::string_view conformal_map_name(ConformalMap map) {
  switch (map) {
    case ConformalMap::kIdentity:
      return "identity";
    case ConformalMap::kSquare:
      return "square";
    case ConformalMap::kExponential:
      return "exponential";
  }
  return "identity";
}

ConformalMap parse_conformal_map(std::string_view name) {
  if (name == "identity") return ConformalMap::kIdentity;
  if (name == "square") return ConformalMap::kSquare;
  if (name == "exponential") return ConformalMap::kExponential;
  throw ParameterError("unknown conformal map '" + std::string(name) +
                       "' (expected identity, square or exponential)");
}

namespace {

State conformal_apply(ConformalMap map, State w) {
  switch (map) {
    case ConformalMap::kSquare:
      return w * w;
    case ConformalMap::kExponential:
      return std::exp(w) - 1.0;
    case ConformalMap::kIdentity:
      break;
  }
  return w;
}

}  // namespace

ConformalSamples conformal_samples(ConformalMap map, std::span<const double> times,
                                   std::size_t n_paths, const GridPolicy& grid,
                                   const McOptions& o) {
  const TimeGrid tg(times, grid);
  const std::size_t m = times.size();
  ConformalSamples out;
  out.times.assign(times.begin(), times.end());
  out.n_paths = n_paths;
  out.steps = tg.total_steps();
  out.max_modulus.resize(n_paths * m);
  out.max_normalized.resize(n_paths * m);
  out.qv_sum.resize(n_paths * m);
  out.qv_integral.resize(n_paths * m);

  auto apply = [map](State w) { return conformal_apply(map, w); };
  // |phi'(W)|^2, the density of [Re M, Re M] against dt.
  auto speed = [map](State w) {
    switch (map) {
      case ConformalMap::kSquare:
        return 4.0 * std::norm(w);
      case ConformalMap::kExponential:
        return std::exp(2.0 * w.real());
      case ConformalMap::kIdentity:
        break;
    }
    return 1.0;
  };

  for_chunks(n_paths, o.chunk, o.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(o.seed, o.stream, i);
      State w{0.0, 0.0};
      State mval = apply(w);
      double qv = 0.0, integral = 0.0, max_mod = std::abs(mval), max_norm = max_mod;
      double rate = speed(w);
      for (std::size_t k = 0; k < m; ++k) {
        const auto& seg = tg.segments()[k];
        const double sd = std::sqrt(seg.dt);
        for (std::size_t s = 0; s < seg.count; ++s) {
          const double z1 = rng.normal();
          const double z2 = rng.normal();
          w += sd * State(z1, z2);
          const State next = apply(w);
          const double dx = next.real() - mval.real();
          qv += dx * dx;
          const double next_rate = speed(w);
          integral += 0.5 * seg.dt * (rate + next_rate);
          rate = next_rate;
          mval = next;
          const double mod = std::abs(mval);
          max_mod = std::max(max_mod, mod);
          max_norm = std::max(max_norm, mod / std::sqrt(1.0 + qv));
        }
        out.max_modulus[i * m + k] = max_mod;
        out.max_normalized[i * m + k] = max_norm;
        out.qv_sum[i * m + k] = qv;
        out.qv_integral[i * m + k] = integral;
      }
    }
  });
  return out;
}

namespace {

std::vector<double> column_means(const std::vector<double>& v, std::size_t m) {
  std::vector<Accumulator> acc(m);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i % m].add(v[i]);
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = acc[k].mean();
  return out;
}

// E F(numerator) / E F(transform(denominator)) per column, with a delta-method
// band on the log ratio that treats the two means as independent.
RatioEnvelope paired_envelope(const ModerateFunction& f, const ConformalSamples& s,
                              const std::vector<double>& numerator,
                              const std::function<double(double)>& transform, double z) {
  const std::size_t m = s.times.size();
  RatioEnvelope e;
  e.moderate = f.descriptor();
  e.n_paths = s.n_paths;
  e.steps = s.steps;
  e.z = z;
  for (std::size_t k = 0; k < m; ++k) {
    Accumulator num, den;
    for (std::size_t i = 0; i < s.n_paths; ++i) {
      num.add(f(numerator[i * m + k]));
      den.add(f(transform(s.qv_sum[i * m + k])));
    }
    EnvelopePoint p;
    p.time = s.times[k];
    p.mean = num.mean();
    p.standard_error = num.standard_error();
    p.growth = den.mean();
    p.ratio = p.growth > 0.0 ? p.mean / p.growth : std::numeric_limits<double>::infinity();
    double w = 0.0;
    if (p.mean > 0.0 && p.growth > 0.0)
      w = z * std::hypot(num.standard_error() / p.mean, den.standard_error() / p.growth);
    p.lower = p.ratio * std::exp(-w);
    p.upper = p.ratio * std::exp(w);
    e.points.push_back(p);
  }
  summarize(e);
  return e;
}

double normalized_growth(double q) { return std::sqrt(std::log1p(std::log1p(q))); }

// Relative gap between E [X,X]_t summed on the grid and on its halving, both
// taken along the same Brownian paths; max over the observation times.
double qv_refinement_delta(ConformalMap map, std::span<const double> times, std::size_t n_paths,
                           const GridPolicy& grid, const McOptions& o) {
  const TimeGrid tg(times, grid);
  const std::size_t m = times.size();
  std::vector<double> coarse(n_paths * m), fine(n_paths * m);
  for_chunks(n_paths, o.chunk, o.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(o.seed, o.stream, i);
      State w{0.0, 0.0};
      State m0 = conformal_apply(map, w);
      double qc = 0.0, qf = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const auto& seg = tg.segments()[k];
        const double sd = std::sqrt(0.5 * seg.dt);
        for (std::size_t s = 0; s < seg.count; ++s) {
          const double a1 = rng.normal(), a2 = rng.normal();
          const double b1 = rng.normal(), b2 = rng.normal();
          const State mid = conformal_apply(map, w + sd * State(a1, a2));
          w += sd * State(a1 + b1, a2 + b2);
          const State m1 = conformal_apply(map, w);
          const double d0 = mid.real() - m0.real();
          const double d1 = m1.real() - mid.real();
          const double d = m1.real() - m0.real();
          qf += d0 * d0 + d1 * d1;
          qc += d * d;
          m0 = m1;
        }
        coarse[i * m + k] = qc;
        fine[i * m + k] = qf;
      }
    }
  });
  const auto a = column_means(coarse, m);
  const auto b = column_means(fine, m);
  double delta = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (b[k] > 0.0) delta = std::max(delta, std::abs(a[k] - b[k]) / b[k]);
  }
  return delta;
}

}  // namespace

ConformalEnvelopes conformal_envelopes(ConformalMap map, std::span<const ModerateFunction> fs,
                                       const ConformalOptions& o) {
  require_increasing(o.times, "conformal times");
  const auto s = conformal_samples(map, o.times, o.n_paths, o.grid, o.mc);
  const std::size_t m = o.times.size();

  ConformalEnvelopes out;
  const auto sum_means = column_means(s.qv_sum, m);
  const auto int_means = column_means(s.qv_integral, m);
  for (std::size_t k = 0; k < m; ++k) {
    if (int_means[k] > 0.0)
      out.agreement_delta =
          std::max(out.agreement_delta, std::abs(sum_means[k] - int_means[k]) / int_means[k]);
  }
  const std::size_t np = std::max<std::size_t>(100, o.n_paths / 10);
  out.refinement_delta =
      qv_refinement_delta(map, o.times, np, o.grid, with_stream(o.mc, streams::kPilot));

  for (const auto& f : fs) {
    out.plain.push_back(
        paired_envelope(f, s, s.max_modulus, [](double q) { return std::sqrt(q); }, o.z));
    out.normalized.push_back(paired_envelope(f, s, s.max_normalized, normalized_growth, o.z));
  }
  return out;
}

CheckReport conformal_scenario(ConformalMap map, std::span<const ModerateFunction> fs,
                               const ConformalLimits& limits, const ConformalOptions& o) {
  if (limits.plain.size() != fs.size() || limits.normalized.size() != fs.size())
    throw ParameterError("one spread limit per moderate function is needed for both forms");
  CheckReport r;
  r.name = "conformal_scenario";
  r.parameters = {{"map", std::string(conformal_map_name(map))},
                  {"moderate", descriptors(fs)},
                  {"times", o.times},
                  {"n_paths", o.n_paths},
                  {"spread_limits", limits.plain},
                  {"normalized_spread_limits", limits.normalized},
                  {"min_ratio", o.min_ratio},
                  {"max_refinement_delta", o.max_refinement_delta}};
  r.seeds = {o.mc.seed};
  const auto env = conformal_envelopes(map, fs, o);
  Json plain = Json::array(), normalized = Json::array();
  auto judge = [&](const RatioEnvelope& e, double limit, const char* form, Json& list) {
    if (!std::isfinite(e.spread) || e.spread > limit)
      escalate(r, Verdict::kFail,
               std::string(form) + " spread " + fmt(e.spread) + " exceeds limit " + fmt(limit) +
                   " for " + e.moderate);
    if (!(e.min_ratio >= o.min_ratio))
      escalate(r, Verdict::kFail,
               std::string(form) + " min ratio " + fmt(e.min_ratio) + " below " +
                   fmt(o.min_ratio) + " for " + e.moderate);
    Json j = envelope_json(e);
    j["spread_limit"] = limit;
    list.push_back(std::move(j));
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    judge(env.plain[i], limits.plain[i], "plain", plain);
    judge(env.normalized[i], limits.normalized[i], "normalized", normalized);
  }
  if (env.refinement_delta > o.max_refinement_delta)
    escalate(r, Verdict::kInconclusive,
             "quadratic-variation refinement delta " + fmt(env.refinement_delta) + " above " +
                 fmt(o.max_refinement_delta));
  if (env.agreement_delta > o.max_refinement_delta)
    escalate(r, Verdict::kInconclusive,
             "quadratic variation from increments and from the integral differ by " +
                 fmt(env.agreement_delta));
  r.witness = {{"plain", std::move(plain)},
               {"normalized", std::move(normalized)},
               {"refinement_delta", env.refinement_delta},
               {"agreement_delta", env.agreement_delta}};
  return r;
}

CheckReport conformal_identity_check(std::span<const ModerateFunction> fs,
                                     const ConformalOptions& o, double z) {
  CheckReport r;
  r.name = "conformal_identity";
  r.parameters = {{"moderate", descriptors(fs)}, {"times", o.times},
                  {"n_paths", o.n_paths},        {"z", z}};
  r.seeds = {o.mc.seed};
  const auto conf = conformal_envelopes(ConformalMap::kIdentity, fs, o);
  const ProcessSpec bm{ComplexBM{}};
  GridPolicy normalized_grid = o.grid;
  normalized_grid.monitor = Monitor::kNormalized;
  const auto plain = ratio_envelopes(bm, fs, o.times, o.n_paths, o.grid, o.mc, o.z);
  const auto norm = ratio_envelopes(bm, fs, o.times, o.n_paths, normalized_grid, o.mc, o.z);

  Json rows = Json::array();
  auto compare = [&](const RatioEnvelope& c, const RatioEnvelope& b, const char* form) {
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      const auto& pc = c.points[k];
      const auto& pb = b.points[k];
      // Standard errors of the ratios, recovered from the log-ratio bands.
      const double sc = pc.ratio * std::log(pc.upper / pc.ratio) / c.z;
      const double sb = pb.ratio * std::log(pb.upper / pb.ratio) / b.z;
      const double joint = std::hypot(sc, sb);
      const double diff = std::abs(pc.ratio - pb.ratio);
      if (!(diff <= z * joint))
        escalate(r, Verdict::kFail,
                 std::string(form) + " ratio " + fmt(pc.ratio) + " differs from ComplexBM " +
                     fmt(pb.ratio) + " by more than " + fmt(z) + " joint SE at t=" +
                     fmt(pc.time) + " for " + c.moderate);
      rows.push_back({{"form", form},
                      {"moderate", c.moderate},
                      {"time", pc.time},
                      {"conformal", pc.ratio},
                      {"complex_bm", pb.ratio},
                      {"joint_standard_error", joint}});
    }
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    compare(conf.plain[i], plain[i], "plain");
    compare(conf.normalized[i], norm[i], "normalized");
  }
  r.witness = {{"points", std::move(rows)},
               {"refinement_delta", conf.refinement_delta},
               {"agreement_delta", conf.agreement_delta}};
  return r;
}

}  // namespace maxineq
