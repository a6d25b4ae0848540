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

// Acceptance suite: one PASS/FAIL line per criterion. With --pilot it instead
// measures envelope spreads on an independent seed and writes the frozen
// thresholds that the envelope criterion reads.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxineq/analytic.hpp"
#include "maxineq/config.hpp"
#include "maxineq/output.hpp"
#include "maxineq/parallel.hpp"
#include "maxineq/rng.hpp"
#include "maxineq/sde.hpp"
#include "maxineq/stats.hpp"
#include "maxineq/runner.hpp"
#include "maxineq/verify.hpp"

using namespace maxineq;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20261017;
constexpr std::uint64_t kPilotSeed = 7;
constexpr double kMargin = 1.25;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  Json detail = Json::object();

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

struct Context {
  int workers = 0;
  fs::path thresholds;
  fs::path scratch;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

McOptions mc(std::uint64_t seed, const Context& ctx) {
  McOptions o;
  o.seed = seed;
  o.workers = ctx.workers;
  return o;
}

std::vector<double> halves(int kmax) {
  std::vector<double> d;
  for (int k = 1; k <= kmax; ++k) d.push_back(std::ldexp(1.0, -k));
  return d;
}

// ---------------------------------------------------------------------------

Outcome analytic_suite(const Context&) {
  Outcome out;
  double worst_residual = 0.0;
  auto residual = [&](const ProcessSpec& s, double hi, const std::string& label) {
    const auto r = check_generator_residual(s, log_points(0.05, hi, 16));
    worst_residual = std::max(worst_residual, r.max_abs);
    out.require(r.max_abs <= 1e-6, label + " residual " + fmt(r.max_abs) + " at x=" + fmt(r.worst_x));
  };
  for (double a : {0.5, 1.0, 2.0}) residual(ProcessSpec(OU{a}), std::sqrt(2.0 / a), "OU " + fmt(a));
  for (double m : {0.5, 1.0, 2.0}) residual(ProcessSpec(BMDrift{m}), 2.0 / m, "BMDrift " + fmt(m));
  for (double a : {0.5, 1.0, 3.0}) residual(ProcessSpec(BESQ{a}), 3.0, "BESQ " + fmt(a));
  const CIR cirs[] = {{1.0, -1.0, 1.0}, {1.0, -1.0, 2.0}, {2.0, -0.5, 1.0}};
  for (const auto& c : cirs) residual(ProcessSpec(c), 3.0, "CIR");

  double worst_trip = 0.0;
  const std::vector<ProcessSpec> specs = {
      ProcessSpec(OU{1.0}),         ProcessSpec(BMDrift{1.0}),        ProcessSpec(ReflectedBMDrift{0.5}),
      ProcessSpec(cirs[0]),         ProcessSpec(BESQ{0.5}),           ProcessSpec(Bessel{2.0}),
      ProcessSpec(RadialOU{2.0, 1.0}), ProcessSpec(ComplexOU{1.0, 0.0}), ProcessSpec(ComplexBM{})};
  for (const auto& s : specs) {
    for (Monitor m : {Monitor::kModulus, Monitor::kNormalized}) {
      if (m == Monitor::kNormalized && s.kind() != ProcessKind::kComplexBM) continue;
      const GrowthFunction g(s, m);
      for (double t : log_points(1e-4, 1e8, 49)) {
        const double rel = std::abs(g.inverse(g(t)) - t) / t;
        worst_trip = std::max(worst_trip, rel);
        out.require(rel <= 1e-10, std::string(kind_name(s.kind())) + " round trip " + fmt(rel) +
                                      " at t=" + fmt(t));
      }
    }
  }

  const auto grid64 = log_points(1e-4, 1e4, 64);
  double worst_slack = std::numeric_limits<double>::infinity();
  for (double m : {0.5, 1.0, 2.0}) {
    const auto r = sandwich_bm_drift(m, grid64);
    worst_slack = std::min(worst_slack, r.min_slack);
    out.require(r.min_slack >= 0.0, "g_mu sandwich violated for mu=" + fmt(m) + " at " + fmt(r.worst_x));
  }
  for (const auto& c : cirs) {
    const auto r = sandwich_cir(c, grid64);
    worst_slack = std::min(worst_slack, r.min_slack);
    out.require(r.min_slack >= 0.0, "f1 <= f <= f2 violated at " + fmt(r.worst_x));
  }

  // log g^{-1}(a y) >= 2 log a + log g^{-1}(y) for OU.
  double worst_gap = std::numeric_limits<double>::infinity();
  for (double alpha : {0.5, 1.0, 2.0}) {
    const GrowthFunction g(ProcessSpec(OU{alpha}));
    for (double a : {2.0, 3.0}) {
      for (double y : log_points(1e-3, 10.0, 32)) {
        const double gap = g.log_inverse(a * y) - (2.0 * std::log(a) + g.log_inverse(y));
        worst_gap = std::min(worst_gap, gap);
        out.require(gap >= -1e-12, "OU inverse growth fails at a=" + fmt(a) + ", x=" + fmt(y));
      }
    }
  }
  out.notes.push_back("max residual " + fmt(worst_residual) + ", max round trip " + fmt(worst_trip) +
                      ", min sandwich slack " + fmt(worst_slack) + ", min inverse-growth gap " +
                      fmt(worst_gap));
  return out;
}

Outcome phi_suite(const Context&) {
  Outcome out;
  const auto deltas = halves(5);
  const auto lambdas = default_lambda_grid();
  const std::vector<std::pair<std::string, ProcessSpec>> cases = {
      {"OU", ProcessSpec(OU{1.0})},
      {"BMDrift", ProcessSpec(BMDrift{1.0})},
      {"BESQ", ProcessSpec(BESQ{1.0})},
      {"CIR", ProcessSpec(CIR{1.0, -1.0, 1.0})}};
  for (const auto& [label, spec] : cases) {
    std::vector<double> values;
    for (double d : deltas) values.push_back(compute_phi(spec, 2.0, d, lambdas).value);
    for (std::size_t k = 1; k < values.size(); ++k)
      out.require(values[k] < values[k - 1], label + " phi not decreasing at delta=" + fmt(deltas[k]));
    if (label == "OU" || label == "BMDrift") {
      for (std::size_t k = 0; k < values.size(); ++k) {
        const double bound = label == "OU" ? deltas[k] * deltas[k] : deltas[k];
        out.require(values[k] <= bound, label + " phi " + fmt(values[k]) + " above " + fmt(bound));
      }
    }
    out.detail[label] = values;
    out.notes.push_back(label + " phi(1/2..1/32) = " + fmt(values.front()) + " .. " + fmt(values.back()));
  }
  return out;
}

Outcome sampler_suite(const Context& ctx) {
  Outcome out;
  const std::size_t n = 1000000;
  const double t = 1.0;
  auto draws = [&](const ProcessSpec& s, std::uint64_t stream, bool euler, std::size_t count,
                   bool squared_modulus) {
    std::vector<double> v(count);
    for_chunks(count, 4096, ctx.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Rng rng(kSeed, stream, i);
        State x = s.x0();
        if (euler) {
          for (int k = 0; k < 4096; ++k) x = euler_step(s, x, t / 4096.0, rng);
        } else {
          x = sample_transition(s, x, t, rng).state;
        }
        v[i] = squared_modulus ? std::norm(x) : x.real();
      }
    });
    return v;
  };
  auto mean_check = [&](const std::string& label, const ProcessSpec& s, double expected, bool sq) {
    Accumulator acc;
    for (double x : draws(s, streams::kPaths, false, n, sq)) acc.add(x);
    const double z = std::abs(acc.mean() - expected) / acc.standard_error();
    out.require(z <= 4.0, label + " mean off by " + fmt(z) + " SE");
    out.notes.push_back(label + " " + fmt(z) + " SE");
  };
  mean_check("OU", ProcessSpec(OU{1.0}, State{1.5, 0.0}), 1.5 * std::exp(-1.0), false);
  mean_check("BESQ(0.5)", ProcessSpec(BESQ{0.5}, State{1.0, 0.0}), 1.5, false);
  mean_check("BESQ(3)", ProcessSpec(BESQ{3.0}, State{1.0, 0.0}), 4.0, false);
  {
    const CIR c{1.0, -2.0, 1.5};
    const double m = 0.5 * std::exp(c.rate) + c.level / -c.rate * (1.0 - std::exp(c.rate));
    mean_check("CIR", ProcessSpec(c, State{0.5, 0.0}), m, false);
  }
  mean_check("ComplexOU", ProcessSpec(ComplexOU{1.0, 2.0}, State{1.0, 1.0}),
             2.0 * std::exp(-2.0) + (1.0 - std::exp(-2.0)), true);

  const std::size_t m = 100000;
  for (const auto& [label, s] : std::vector<std::pair<std::string, ProcessSpec>>{
           {"OU", ProcessSpec(OU{1.0}, State{1.0, 0.0})},
           {"BESQ", ProcessSpec(BESQ{1.0}, State{1.0, 0.0})}}) {
    const auto exact = draws(s, streams::kPairA, false, m, false);
    const auto euler = draws(s, streams::kPairB, true, m, false);
    const double d = ks_statistic(exact, euler);
    const double crit = ks_critical(0.01, m, m);
    out.require(d <= crit, label + " exact vs Euler KS " + fmt(d) + " > " + fmt(crit));
    out.notes.push_back(label + " KS " + fmt(d) + "/" + fmt(crit));
  }
  return out;
}

Outcome identity_suite(const Context&) {
  Outcome out;
  const std::size_t n = 100000;
  std::uint64_t seed = kSeed;
  auto judge = [&](const SamplePair& p) {
    const auto r = distribution_equiv(p, 0.01);
    out.require(r.passed(), p.label + ": " + r.reason);
    out.detail[p.label] = r.witness;
  };
  for (double t : {0.5, 2.0})
    for (double a : {0.5, 1.0}) judge(complex_ou_vs_cir(a, 0.0, t, n, seed++));
  judge(cir_vs_time_changed_besq(CIR{1.0, -1.0, 1.0}, 1.0, n, seed++));
  judge(besq_additivity(1.0, 1.0, 1.0, n, seed++));
  judge(besq_additivity(0.5, 0.5, 1.0, n, seed++));
  judge(time_changed_complex_bm(1.0, 0.0, 1.0, n, seed++));
  double worst = 0.0;
  for (const auto& [k, v] : out.detail.items())
    worst = std::max(worst, v["ks_statistic"].get<double>() / v["critical_value"].get<double>());
  out.notes.push_back("8 pairs, max KS / critical " + fmt(worst));
  return out;
}

Outcome lp_suite(const Context& ctx) {
  Outcome out;
  for (double dim : {1.0, 2.0}) {
    LpOptions o;
    o.times = {0.5, 1.0, 4.0};
    o.exponents = {0.25, 0.5};
    o.n_paths = 100000;
    o.mc = mc(kSeed, ctx);
    const auto r = lp_bound_check(dim, o);
    out.require(r.passed(), "dim " + fmt(dim) + ": " + r.reason);
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& p : r.witness["points"])
      slack = std::min(slack, p["bound"].get<double>() / p["mean"].get<double>());
    out.notes.push_back("dim " + fmt(dim) + " min bound/estimate " + fmt(slack));
  }
  return out;
}

Outcome controllability_suite(const Context& ctx) {
  Outcome out;
  ControllabilityOptions o;
  o.times = {0.01, 0.1, 1.0, 10.0};
  o.levels = {0.1, 0.3, 1.0, 3.0};
  o.n_paths = 20000;
  o.mc = mc(kSeed, ctx);
  const std::vector<std::pair<std::string, ProcessSpec>> cases = {
      {"OU", ProcessSpec(OU{1.0})},
      {"BESQ(0.5)", ProcessSpec(BESQ{0.5})},
      {"BESQ(2)", ProcessSpec(BESQ{2.0})},
      {"ReflectedBMDrift", ProcessSpec(ReflectedBMDrift{1.0})}};
  for (const auto& [label, s] : cases) {
    const auto r = controllability_check(s, default_controllability(s), o);
    out.require(r.passed(), label + ": " + r.reason);
    out.notes.push_back(label + " " + std::string(verdict_name(r.verdict)));
  }
  const ProcessSpec besq(BESQ{2.0});
  auto wrong = default_controllability(besq);
  wrong.C = 0.01;
  const auto r = controllability_check(besq, wrong, o);
  out.require(r.verdict == Verdict::kFail, "C = 0.01 was not rejected");
  out.notes.push_back("C=0.01 " + std::string(verdict_name(r.verdict)));
  return out;
}

// ---------------------------------------------------------------------------
// Envelope suite shared by the acceptance run and the pilot.

struct EnvelopeCase {
  std::string label;
  ProcessSpec spec;
  Monitor monitor;
};

std::vector<EnvelopeCase> envelope_cases() {
  return {{"OU", ProcessSpec(OU{1.0}), Monitor::kModulus},
          {"BMDrift", ProcessSpec(BMDrift{1.0}), Monitor::kModulus},
          {"ReflectedBMDrift", ProcessSpec(ReflectedBMDrift{1.0}), Monitor::kModulus},
          {"CIR", ProcessSpec(CIR{1.0, -1.0, 1.0}), Monitor::kModulus},
          {"BESQ", ProcessSpec(BESQ{1.0}), Monitor::kModulus},
          {"Bessel", ProcessSpec(Bessel{2.0}), Monitor::kModulus},
          {"RadialOU", ProcessSpec(RadialOU{2.0, 1.0}), Monitor::kModulus},
          {"ComplexOU", ProcessSpec(ComplexOU{1.0, 0.0}), Monitor::kModulus},
          {"ComplexBM", ProcessSpec(ComplexBM{}), Monitor::kModulus},
          {"ComplexBM-normalized", ProcessSpec(ComplexBM{}), Monitor::kNormalized}};
}

std::vector<ModerateFunction> envelope_functions() {
  return {ModerateFunction::power(0.5), ModerateFunction::power(1.0), ModerateFunction::power(2.0),
          ModerateFunction::power_log(1.0, 1.0)};
}

double spread_cap(const std::string& descriptor) {
  return descriptor == "pow:0.5" || descriptor == "pow:1" ? 10.0 : 50.0;
}

TwoSidedOptions envelope_options(std::uint64_t seed, Monitor monitor, const Context& ctx) {
  TwoSidedOptions o;
  o.times = log_grid(1e-2, 1e4, 2);
  o.n_paths = 100000;
  o.grid = GridPolicy::per_unit(4096.0, std::size_t{1} << 14, 32);
  o.grid.monitor = monitor;
  o.mc = mc(seed, ctx);
  o.pilot = false;
  return o;
}

Outcome envelope_suite(const Context& ctx) {
  Outcome out;
  std::ifstream in(ctx.thresholds);
  if (!in) {
    out.require(false, "no frozen thresholds at " + ctx.thresholds.string());
    return out;
  }
  const Json frozen = Json::parse(in);
  const auto fs_list = envelope_functions();
  for (const auto& c : envelope_cases()) {
    const auto o = envelope_options(kSeed, c.monitor, ctx);
    EnvelopeLimits limits;
    for (const auto& f : fs_list)
      limits.spread.push_back(frozen.at("limits").at(c.label).at(f.descriptor()).get<double>());
    const auto samples = sup_samples(c.spec, o.times, o.n_paths, o.grid, o.mc);
    const auto r = two_sided_from_samples(c.spec, samples, o.times, fs_list, limits, o);
    out.require(r.passed(), c.label + ": " + r.reason);
    std::string line = c.label;
    for (const auto& e : r.witness["envelopes"]) {
      line += " " + fmt(e["spread"].get<double>()) + "/" + fmt(e["spread_limit"].get<double>());
      out.detail[c.label][e["moderate"].get<std::string>()] = {{"spread", e["spread"]},
                                                              {"limit", e["spread_limit"]},
                                                              {"min_ratio", e["min_ratio"]}};
    }
    out.notes.push_back(line);
    if (c.label == "OU") {
      const GrowthOverride sqrt_growth{"g(t) = t^{1/2}", [](double t) { return std::sqrt(t); }};
      const auto wrong =
          two_sided_from_samples(c.spec, samples, o.times, fs_list, limits, o, sqrt_growth);
      out.require(wrong.verdict == Verdict::kFail, "OU against sqrt(t) was not rejected");
      std::string w = "OU vs sqrt(t):";
      for (const auto& e : wrong.witness["envelopes"]) w += " " + fmt(e["spread"].get<double>());
      out.notes.push_back(w + " (" + std::string(verdict_name(wrong.verdict)) + ")");
    }
  }
  return out;
}

int write_pilot(const Context& ctx) {
  const auto fs_list = envelope_functions();
  Json limits = Json::object(), spreads = Json::object();
  for (const auto& c : envelope_cases()) {
    const auto o = envelope_options(kPilotSeed, c.monitor, ctx);
    const auto envs = ratio_envelopes(c.spec, fs_list, o.times, o.n_paths, o.grid, o.mc, o.z);
    for (const auto& e : envs) {
      spreads[c.label][e.moderate] = e.spread;
      limits[c.label][e.moderate] = std::min(kMargin * e.spread, spread_cap(e.moderate));
    }
    std::cerr << c.label << " done\n";
  }
  const Json doc = {
      {"procedure",
       "Envelope spreads measured once with the pilot seed (n_paths, time grid and step policy as "
       "in the acceptance run); each limit is margin * pilot spread, capped at 10 for pow:0.5 and "
       "pow:1 and at 50 for pow:2 and powlog:1,1. Regenerate with `acceptance --pilot <file>`."},
      {"pilot_seed", kPilotSeed},
      {"n_paths", 100000},
      {"margin", kMargin},
      {"caps", {{"pow:0.5", 10.0}, {"pow:1", 10.0}, {"pow:2", 50.0}, {"powlog:1,1", 50.0}}},
      {"pilot_spreads", spreads},
      {"limits", limits}};
  write_atomic(ctx.thresholds, canonical_json(doc));
  std::cout << "wrote " << ctx.thresholds.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

Outcome good_lambda_suite(const Context& ctx) {
  Outcome out;
  const auto levels = log_points(0.05, 2.0, 16);
  const auto lambdas = log_grid(1e-2, 1e2, 16);
  for (const auto& [label, spec] : std::vector<std::pair<std::string, ProcessSpec>>{
           {"OU", ProcessSpec(OU{1.0})}, {"BMDrift", ProcessSpec(BMDrift{1.0})}}) {
    const auto hp = hitting_pairs(spec, levels, 1e4, 100000, GridPolicy::standard(), mc(kSeed, ctx));
    out.require(hp.censored_fraction <= 0.01, label + " censored " + fmt(hp.censored_fraction));
    for (const bool upper : {true, false}) {
      GoodLambdaOptions o;
      o.deltas = halves(4);
      o.lambdas = lambdas;
      if (!upper)
        for (double d : o.deltas) o.analytic.push_back(*analytic_phi(spec, d));
      const auto r = upper ? good_lambda_check(hp.maximum, hp.growth, o)
                           : good_lambda_check(hp.growth, hp.maximum, o);
      const std::string tag = label + (upper ? " upper" : " lower");
      out.require(r.passed(), tag + ": " + r.reason);
      std::string line = tag + " phi_hat";
      for (const auto& p : r.witness["profile"]) line += " " + fmt(p["phi_hat"].get<double>());
      out.notes.push_back(line);
    }
  }
  return out;
}

Outcome conformal_suite(const Context& ctx) {
  Outcome out;
  ConformalOptions o;
  o.times = log_grid(1e-2, 1e2, 2);
  o.n_paths = 10000;
  o.mc = mc(kSeed, ctx);
  const auto fs_list = envelope_functions();
  const auto id = conformal_identity_check(fs_list, o, 4.0);
  out.require(id.passed(), "identity map: " + id.reason);
  out.notes.push_back("identity map " + std::string(verdict_name(id.verdict)));
  ConformalLimits finite;
  finite.plain.assign(fs_list.size(), std::numeric_limits<double>::infinity());
  finite.normalized = finite.plain;
  const auto sq = conformal_scenario(ConformalMap::kSquare, fs_list, finite, o);
  out.require(sq.passed(), "square map: " + sq.reason);
  std::string line = "W^2 spreads";
  for (const char* form : {"plain", "normalized"})
    for (const auto& e : sq.witness[form]) line += " " + fmt(e["spread"].get<double>());
  line += ", QV refinement " + fmt(sq.witness["refinement_delta"].get<double>());
  out.notes.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome infrastructure_suite(const Context& ctx) {
  Outcome out;
  const char* config_text = R"({
    "seed": 11, "n_paths": 4000,
    "processes": [{"name": "ou", "kind": "OU", "rate": 1},
                  {"name": "cir", "kind": "CIR", "level": 1, "rate": -1, "vol": 1},
                  {"name": "w", "kind": "ComplexBM", "monitor": "normalized"}],
    "moderate": ["pow:0.5", "pow:2"],
    "time_grid": {"from": 0.01, "to": 100, "per_decade": 1},
    "grid": {"steps_per_unit": 1024, "max_steps": 4096},
    "checks": {"envelope": {"spot_paths": 1000},
               "good_lambda": {"processes": ["ou"], "n_paths": 4000},
               "lp_bound": {"dims": [1], "times": [1]},
               "identities": {"n_paths": 4000},
               "conformal": {"n_paths": 1000}}
  })";
  const fs::path base = ctx.scratch / "infrastructure";
  fs::remove_all(base);
  auto config = parse_config(config_text, "infrastructure");
  std::vector<fs::path> dirs;
  for (int w : {1, 2, 8}) {
    config.workers = w;
    dirs.push_back(base / ("workers" + std::to_string(w)));
    run_checks(config, dirs.back());
  }
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dirs[0]);
    ++files;
    for (std::size_t k = 1; k < dirs.size(); ++k)
      out.require(slurp(entry.path()) == slurp(dirs[k] / rel),
                  rel.string() + " differs between worker counts");
  }
  const auto rep = replay(dirs[0] / "manifest.json", base / "replay", 2);
  out.require(rep.mismatched.empty() && !rep.run.checks.empty(), "replay tables differ");
  for (const auto& m : rep.mismatched) out.notes.push_back("replay mismatch " + m);

  for (const char* rate : {"0", "1"}) {
    const std::string text = std::string(R"({"seed": 1, "processes": [{"kind": "CIR", "level": 1, "rate": )") +
                             rate + R"(, "vol": 1}]})";
    std::string message;
    try {
      parse_config(text, "cir");
    } catch (const ConfigError& e) {
      message = e.what();
    }
    out.require(message.find("b < 0") != std::string::npos,
                std::string("CIR with b = ") + rate + " not rejected with the b < 0 requirement");
  }
  out.notes.push_back(std::to_string(files) + " files identical for workers 1/2/8, " +
                      std::to_string(rep.run.checks.size()) + " checks replayed, CIR b >= 0 rejected");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-10"};
  Context ctx;
  ctx.thresholds = fs::path(MAXINEQ_SOURCE_DIR) / "tests" / "envelope_thresholds.json";
  ctx.scratch = fs::temp_directory_path() / "maxineq_acceptance";
  std::vector<int> only;
  std::vector<int> allowed;
  std::string pilot;
  std::string report;
  app.add_option("criteria", only, "Run only these criteria (1-10)");
  app.add_option("--workers", ctx.workers, "Worker threads (0: one per core)");
  app.add_option("--thresholds", ctx.thresholds, "Frozen envelope thresholds");
  app.add_option("--pilot", pilot, "Measure pilot spreads and write thresholds to this file");
  app.add_option("--report", report, "Write a JSON summary here");
  app.add_option("--allow-fail", allowed,
                 "Criteria whose failure is known; still reported, but not in the exit code");
  CLI11_PARSE(app, argc, argv);

  if (!pilot.empty()) {
    ctx.thresholds = pilot;
    return write_pilot(ctx);
  }

  const std::vector<std::pair<std::string, std::function<Outcome(const Context&)>>> suites = {
      {"analytic suite", analytic_suite},
      {"phi suite", phi_suite},
      {"sampler suite", sampler_suite},
      {"identity suite", identity_suite},
      {"Lp bound", lp_suite},
      {"controllability suite", controllability_suite},
      {"two-sided envelope suite", envelope_suite},
      {"good-lambda suite", good_lambda_suite},
      {"conformal scenario", conformal_suite},
      {"infrastructure", infrastructure_suite}};

  bool all = true;
  Json summary = Json::array();
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = suites[i].second(ctx);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = std::find(allowed.begin(), allowed.end(), id) != allowed.end();
    all = all && (o.pass || known);
    std::string notes;
    for (const auto& n : o.notes) notes += (notes.empty() ? "" : "; ") + n;
    std::printf("criterion %2d %s: %s (%.1f s) %s\n", id, suites[i].first.c_str(),
                o.pass ? "PASS" : (known ? "FAIL (known)" : "FAIL"), secs, notes.c_str());
    std::fflush(stdout);
    summary.push_back({{"criterion", id},
                       {"name", suites[i].first},
                       {"pass", o.pass},
                       {"known_failure", known && !o.pass},
                       {"seconds", secs},
                       {"notes", o.notes},
                       {"detail", o.detail}});
  }
  if (!report.empty()) write_atomic(report, canonical_json(summary));
  return all ? 0 : 1;
}
