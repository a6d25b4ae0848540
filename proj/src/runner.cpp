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

#include "maxineq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "maxineq/analytic.hpp"
#include "maxineq/moderate.hpp"
#include "maxineq/output.hpp"

namespace maxineq {
namespace {

namespace fs = std::filesystem;

struct Check {
  std::string id;
  std::function<CheckReport()> run;
  std::string plot_prefix;  // empty: no plots
};

std::vector<ModerateFunction> moderate_functions(const RunConfig& c) {
  std::vector<ModerateFunction> out;
  for (const auto& d : c.moderate) out.push_back(ModerateFunction::parse(d));
  return out;
}

McOptions mc_for(const RunConfig& c) {
  McOptions mc;
  mc.seed = c.seed;
  mc.workers = c.workers;
  return mc;
}

std::vector<const NamedProcess*> select(const RunConfig& c, const std::vector<std::string>& names,
                                        const std::function<bool(const NamedProcess&)>& fallback) {
  std::vector<const NamedProcess*> out;
  if (names.empty()) {
    for (const auto& p : c.processes) {
      if (fallback(p)) out.push_back(&p);
    }
    return out;
  }
  for (const auto& n : names) {
    for (const auto& p : c.processes) {
      if (p.name == n) out.push_back(&p);
    }
  }
  return out;
}

bool has_controllability(const NamedProcess& p) {
  try {
    (void)default_controllability(p.spec);
    return true;
  } catch (const ParameterError&) {
    return false;
  }
}

void flatten(const Json& v, const std::string& path, CsvTable& table) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it)
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), table);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      flatten(v[i], path + "[" + std::to_string(i) + "]", table);
  } else if (v.is_number_float()) {
    table.row({path, format_double(v.get<double>())});
  } else if (v.is_string()) {
    table.row({path, v.get<std::string>()});
  } else if (v.is_null()) {
    table.row({path, ""});
  } else {
    table.row({path, v.dump()});
  }
}

RatioEnvelope envelope_from_json(const Json& j) {
  RatioEnvelope e;
  e.moderate = j.at("moderate").get<std::string>();
  for (const auto& p : j.at("points")) {
    EnvelopePoint q;
    q.time = p.at("time").get<double>();
    q.mean = p.at("mean").get<double>();
    q.standard_error = p.at("standard_error").get<double>();
    q.growth = p.at("growth").get<double>();
    q.ratio = p.at("ratio").get<double>();
    q.lower = p.at("lower").get<double>();
    q.upper = p.at("upper").get<double>();
    e.points.push_back(q);
  }
  return e;
}

// Every envelope inside a witness, labelled by the key that holds its list.
void collect_envelopes(const Json& v, const std::string& label,
                       std::vector<std::pair<std::string, RatioEnvelope>>& out) {
  if (v.is_object()) {
    if (v.contains("moderate") && v.contains("points") && v["points"].is_array() &&
        !v["points"].empty() && v["points"][0].contains("upper")) {
      out.emplace_back(label, envelope_from_json(v));
      return;
    }
    for (auto it = v.begin(); it != v.end(); ++it) {
      const bool named = it.key() == "plain" || it.key() == "normalized";
      collect_envelopes(it.value(), named ? it.key() : label, out);
    }
  } else if (v.is_array()) {
    for (const auto& x : v) collect_envelopes(x, label, out);
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Check> plan(const RunConfig& c) {
  std::vector<Check> checks;
  const auto fs_list = moderate_functions(c);
  const auto& th = c.thresholds;
  const auto& ck = c.checks;

  if (ck.envelope) {
    const auto settings = *ck.envelope;
    for (const auto* p : select(c, settings.processes, [](const NamedProcess&) { return true; })) {
      checks.push_back({"envelope-" + p->name,
                        [&c, p, settings, fs_list, &th] {
                          TwoSidedOptions o;
                          o.times = c.times;
                          o.n_paths = c.n_paths;
                          o.grid = c.grid.policy(p->monitor);
                          o.mc = mc_for(c);
                          o.z = th.z;
                          o.max_censored = th.max_censored;
                          // A one-sided level is missed forever with positive probability.
                          if (settings.spot_check && p->monitor != Monitor::kUpper) {
                            // Levels the process reaches at typical times 0.1, 1 and 10.
                            const GrowthFunction g(p->spec, p->monitor);
                            o.spot_levels = {g(0.1), g(1.0), g(10.0)};
                            o.spot_paths = std::min(settings.spot_paths, c.n_paths);
                          }
                          EnvelopeLimits limits;
                          limits.min_ratio = th.min_ratio;
                          for (const auto& f : fs_list)
                            limits.spread.push_back(th.spread_for(p->name + "/" + f.descriptor()));
                          std::optional<GrowthOverride> growth;
                          if (settings.growth == "sqrt")
                            growth = GrowthOverride{"g(t) = t^{1/2}",
                                                    [](double t) { return std::sqrt(t); }};
                          return two_sided_check(p->spec, fs_list, limits, o, growth);
                        },
                        p->name});
    }
  }

  if (ck.controllability) {
    const auto settings = *ck.controllability;
    for (const auto* p : select(c, settings.processes, has_controllability)) {
      checks.push_back({"controllability-" + p->name,
                        [&c, p, settings, &th] {
                          ControllabilityConstants k;
                          try {
                            k = default_controllability(p->spec);
                          } catch (const ParameterError&) {
                            if (!settings.beta || !settings.gamma || !settings.C) throw;
                          }
                          if (settings.beta) k.beta = *settings.beta;
                          if (settings.gamma) k.gamma = *settings.gamma;
                          if (settings.C) k.C = *settings.C;
                          ControllabilityOptions o;
                          o.times = settings.times;
                          o.levels = settings.levels;
                          o.n_paths = settings.n_paths.value_or(c.n_paths);
                          o.grid = GridPolicy::per_unit(c.grid.steps_per_unit, c.grid.max_steps,
                                                        c.grid.min_segment_steps);
                          o.mc = mc_for(c);
                          o.ci_multiplier = th.ci_multiplier;
                          return controllability_check(p->spec, k, o);
                        },
                        ""});
    }
  }

  if (ck.good_lambda) {
    const auto settings = *ck.good_lambda;
    auto has_phi = [&settings](const NamedProcess& p) {
      return analytic_phi(p.spec, settings.deltas.empty() ? 0.5 : settings.deltas.front())
          .has_value();
    };
    for (const auto* p : select(c, settings.processes, has_phi)) {
      // Both orientations share one set of hitting pairs.
      auto pairs = std::make_shared<std::optional<HittingPairs>>();
      auto sample = [&c, p, settings, pairs]() -> const HittingPairs& {
        if (!*pairs) {
          const auto levels =
              settings.levels.empty() ? log_points(0.05, 2.0, 16) : settings.levels;
          *pairs = hitting_pairs(p->spec, levels, settings.cap, settings.n_paths.value_or(c.n_paths),
                                 c.grid.policy(), mc_for(c));
        }
        return **pairs;
      };
      for (const std::string orientation : {"upper", "lower"}) {
        if (settings.orientation != "both" && settings.orientation != orientation) continue;
        checks.push_back(
            {"good_lambda-" + p->name + "-" + orientation,
             [p, settings, sample, orientation, &th] {
               const auto& hp = sample();
               GoodLambdaOptions o;
               o.beta = settings.beta;
               o.deltas = settings.deltas;
               o.lambdas = log_grid(settings.lambda_lo, settings.lambda_hi,
                                    settings.lambda_per_decade);
               o.ci_multiplier = th.ci_multiplier;
               const bool upper = orientation == "upper";
               if (!upper) {
                 for (double d : o.deltas) {
                   const auto phi = analytic_phi(p->spec, d);
                   if (!phi) {
                     o.analytic.clear();
                     break;
                   }
                   o.analytic.push_back(*phi);
                 }
               }
               auto r = upper ? good_lambda_check(hp.maximum, hp.growth, o)
                              : good_lambda_check(hp.growth, hp.maximum, o);
               r.parameters["process"] = process_json(p->spec);
               r.parameters["orientation"] = orientation;
               r.parameters["cap"] = settings.cap;
               r.parameters["censored_fraction"] = hp.censored_fraction;
               if (hp.censored_fraction > th.max_censored && r.verdict == Verdict::kPass) {
                 r.verdict = Verdict::kInconclusive;
                 r.reason = "censored fraction " + format_double(hp.censored_fraction) +
                            " above " + format_double(th.max_censored);
               }
               return r;
             },
             ""});
      }
    }
  }

  if (ck.lp_bound) {
    const auto settings = *ck.lp_bound;
    for (double dim : settings.dims) {
      checks.push_back({"lp_bound-dim" + file_stem(format_double(dim)),
                        [&c, dim, settings, &th] {
                          LpOptions o;
                          o.times = settings.times;
                          o.exponents = settings.exponents;
                          o.n_paths = settings.n_paths.value_or(c.n_paths);
                          o.grid = c.grid.policy();
                          o.mc = mc_for(c);
                          o.se_multiplier = th.ci_multiplier;
                          return lp_bound_check(dim, o);
                        },
                        ""});
    }
  }

  if (ck.identities) {
    const auto settings = *ck.identities;
    checks.push_back({"identities",
                      [&c, settings, &th] {
                        const std::size_t n = settings.n_paths.value_or(c.n_paths);
                        std::vector<CheckReport> parts;
                        for (std::size_t i = 0; i < settings.pairs.size(); ++i) {
                          const auto& q = settings.pairs[i];
                          const auto kind = q.at("kind").get<std::string>();
                          const double t = q.at("t").get<double>();
                          auto num = [&q](const char* k) { return q.at(k).get<double>(); };
                          // Each pair draws from its own seed.
                          const std::uint64_t seed = c.seed + i;
                          SamplePair pair;
                          if (kind == "complex_ou_cir")
                            pair = complex_ou_vs_cir(num("rate"), num("rotation"), t, n, seed);
                          else if (kind == "cir_besq")
                            pair = cir_vs_time_changed_besq(
                                CIR{num("level"), num("rate"), num("vol")}, t, n, seed);
                          else if (kind == "besq_additivity")
                            pair = besq_additivity(num("dim_a"), num("dim_b"), t, n, seed);
                          else if (kind == "complex_bm_time_change")
                            pair = time_changed_complex_bm(num("rate"), num("rotation"), t, n, seed);
                          else
                            pair = cir_self_pair(CIR{num("level"), num("rate"), num("vol")}, t, n,
                                                 seed);
                          auto r = distribution_equiv(pair, th.ks_level);
                          r.parameters["pair"] = q;
                          r.seeds = {seed};
                          parts.push_back(std::move(r));
                        }
                        return combine_reports("identities", std::move(parts));
                      },
                      ""});
  }

  if (ck.conformal) {
    const auto settings = *ck.conformal;
    auto options = [&c, settings, &th] {
      ConformalOptions o;
      o.times = settings.times.empty() ? log_grid(1e-2, 1e2, 2) : settings.times;
      o.n_paths = settings.n_paths.value_or(c.n_paths);
      o.grid = GridPolicy::per_unit(c.grid.steps_per_unit, c.grid.max_steps,
                                    std::max<std::size_t>(c.grid.min_segment_steps, 64));
      o.mc = mc_for(c);
      o.z = th.z;
      o.max_refinement_delta = th.max_refinement_delta;
      o.min_ratio = th.min_ratio;
      return o;
    };
    for (const auto& name : settings.maps) {
      const ConformalMap map = parse_conformal_map(name);
      checks.push_back({"conformal-" + name,
                        [map, name, options, fs_list, &th] {
                          ConformalLimits limits;
                          for (const auto& f : fs_list) {
                            limits.plain.push_back(
                                th.spread_for(name + "/plain/" + f.descriptor()));
                            limits.normalized.push_back(
                                th.spread_for(name + "/normalized/" + f.descriptor()));
                          }
                          return conformal_scenario(map, fs_list, limits, options());
                        },
                        "conformal-" + name});
    }
    if (settings.identity_check) {
      checks.push_back({"conformal-identity",
                        [options, fs_list, &th] {
                          return conformal_identity_check(fs_list, options(), th.ci_multiplier);
                        },
                        ""});
    }
  }
  return checks;
}

}  // namespace

std::string file_stem(std::string_view text) {
  std::string out;
  for (char ch : text) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '.' || ch == '-' || ch == '_';
    out += keep ? ch : '_';
  }
  return out;
}

int exit_code_for(const std::vector<CheckOutcome>& checks) {
  Verdict v = Verdict::kPass;
  for (const auto& c : checks) v = worst(v, c.verdict);
  if (v == Verdict::kFail) return kExitFail;
  if (v == Verdict::kInconclusive) return kExitInconclusive;
  return kExitPass;
}

RunResult run_checks(const RunConfig& config, const fs::path& out, std::ostream* log) {
  RunResult result;
  Json listing = Json::array();
  for (const auto& check : plan(config)) {
    if (log) *log << "[" << check.id << "] running\n" << std::flush;
    CheckReport report = check.run();
    const Json j = to_json(report);
    const std::string report_path = "reports/" + check.id + ".json";
    const std::string table_path = "tables/" + check.id + ".csv";
    write_atomic(out / report_path, canonical_json(j));
    CsvTable table({"field", "value"});
    flatten(report.witness, "", table);
    write_atomic(out / table_path, table.str());

    Json plots = Json::array();
    if (!check.plot_prefix.empty()) {
      std::vector<std::pair<std::string, RatioEnvelope>> envs;
      collect_envelopes(report.witness, "", envs);
      for (const auto& [label, e] : envs) {
        std::string stem = check.plot_prefix + "_";
        if (!label.empty()) stem += label + "_";
        stem += file_stem(e.moderate);
        const std::string path = "plots/" + stem + ".svg";
        write_atomic(out / path, envelope_svg(e, check.id + " " + label + " F=" + e.moderate));
        plots.push_back(path);
      }
    }
    listing.push_back({{"id", check.id},
                       {"name", report.name},
                       {"verdict", std::string(verdict_name(report.verdict))},
                       {"reason", report.reason},
                       {"report", report_path},
                       {"table", table_path},
                       {"plots", std::move(plots)}});
    result.checks.push_back({check.id, report.verdict, report.reason});
    if (log) {
      *log << "[" << check.id << "] " << verdict_name(report.verdict);
      if (!report.reason.empty()) *log << ": " << report.reason;
      *log << "\n" << std::flush;
    }
  }
  result.exit_code = exit_code_for(result.checks);
  Json manifest = {{"version", MAXINEQ_VERSION},
                   {"config", resolved_json(config)},
                   {"checks", std::move(listing)},
                   {"exit_code", result.exit_code}};
  result.manifest = out / "manifest.json";
  write_atomic(result.manifest, canonical_json(manifest));
  return result;
}

RunConfig config_from_manifest(const fs::path& manifest) {
  const std::string text = read_file(manifest);
  if (text.empty()) throw ConfigError("cannot read manifest " + manifest.string());
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(manifest.string() + ": " + e.what());
  }
  if (!j.contains("config")) throw ConfigError(manifest.string() + ": no config recorded");
  return parse_config(j["config"].dump(), manifest.string() + "#config");
}

ReplayResult replay(const fs::path& manifest, const fs::path& out, int workers,
                    std::ostream* log) {
  RunConfig config = config_from_manifest(manifest);
  config.workers = workers;
  ReplayResult r;
  r.run = run_checks(config, out, log);
  const fs::path original = manifest.parent_path();
  for (const auto& c : r.run.checks) {
    const std::string table = "tables/" + c.id + ".csv";
    if (read_file(original / table) != read_file(out / table)) r.mismatched.push_back(table);
  }
  return r;
}

}  // namespace maxineq
