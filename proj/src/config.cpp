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

#include "maxineq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "maxineq/analytic.hpp"
#include "maxineq/moderate.hpp"
#include "maxineq/verify.hpp"

namespace maxineq {
namespace {

using nlohmann::json;

// Typed, fail-closed view of one JSON object: every key must be consumed.
class Section {
 public:
  Section(const json& j, std::string path, std::string origin)
      : j_(j), path_(std::move(path)), origin_(std::move(origin)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ConfigError(origin_ + ": field '" + field + "': " + msg);
  }
  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return as_number(j_.at(key), field(key));
  }
  double require_number(const std::string& key) {
    if (!has(key)) fail(field(key), "is required");
    return as_number(j_.at(key), field(key));
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    return as_count(j_.at(key), field(key));
  }
  std::optional<std::size_t> optional_count(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return as_count(j_.at(key), field(key));
  }
  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return as_number(j_.at(key), field(key));
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) fail(field(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_number(v[i], field(key) + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_array()) fail(field(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) fail(field(key) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }
  Section sub(const std::string& key) {
    seen_.insert(key);
    return Section(j_.at(key), field(key), origin_);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown key");
    }
  }

  const std::string& path() const { return path_; }
  const std::string& origin() const { return origin_; }

 private:
  double as_number(const json& v, const std::string& f) const {
    if (!v.is_number()) fail(f, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(f, "expected a finite number");
    return d;
  }
  std::size_t as_count(const json& v, const std::string& f) const {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(f, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }

  const json& j_;
  std::string path_;
  std::string origin_;
  std::set<std::string> seen_;
};

const std::vector<std::pair<std::string, std::vector<std::string>>> kIdentityKeys = {
    {"complex_ou_cir", {"rate", "rotation"}},
    {"cir_besq", {"level", "rate", "vol"}},
    {"besq_additivity", {"dim_a", "dim_b"}},
    {"complex_bm_time_change", {"rate", "rotation"}},
    {"cir_self", {"level", "rate", "vol"}},
};

NamedProcess parse_process_section(Section& s) {
  const std::string kind = s.string("kind", "");
  if (kind.empty()) s.fail(s.field("kind"), "is required");
  ProcessKind k;
  try {
    k = parse_kind(kind);
  } catch (const ParameterError& e) {
    s.fail(s.field("kind"), e.what());
  }
  NamedProcess out{s.string("name", kind), ProcessSpec(ComplexBM{}), Monitor::kModulus};
  State x0{0.0, 0.0};
  if (s.has("x0")) {
    const auto& v = s.raw("x0");
    if (v.is_number()) {
      x0 = {v.get<double>(), 0.0};
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      x0 = {v[0].get<double>(), v[1].get<double>()};
    } else {
      s.fail(s.field("x0"), "expected a number or a [real, imag] pair");
    }
  }
  const std::string monitor = s.string("monitor", "modulus");
  if (monitor == "normalized")
    out.monitor = Monitor::kNormalized;
  else if (monitor == "upper")
    out.monitor = Monitor::kUpper;
  else if (monitor != "modulus")
    s.fail(s.field("monitor"), "expected 'modulus', 'upper' or 'normalized'");
  if (out.monitor == Monitor::kUpper && (k == ProcessKind::kComplexOU || k == ProcessKind::kComplexBM))
    s.fail(s.field("monitor"), "the upper form needs a real-valued process");
  if (out.monitor == Monitor::kNormalized && k != ProcessKind::kComplexBM)
    s.fail(s.field("monitor"), "the normalized form exists for ComplexBM only");

  try {
    switch (k) {
      case ProcessKind::kOU:
        out.spec = ProcessSpec(OU{s.require_number("rate")}, x0);
        break;
      case ProcessKind::kBMDrift:
        out.spec = ProcessSpec(BMDrift{s.require_number("drift")}, x0);
        break;
      case ProcessKind::kReflectedBMDrift:
        out.spec = ProcessSpec(ReflectedBMDrift{s.require_number("drift")}, x0);
        break;
      case ProcessKind::kCIR: {
        const double a = s.require_number("level");
        const double b = s.require_number("rate");
        const double c = s.require_number("vol");
        out.spec = ProcessSpec(CIR{a, b, c}, x0);
        break;
      }
      case ProcessKind::kBESQ:
        out.spec = ProcessSpec(BESQ{s.require_number("dim")}, x0);
        break;
      case ProcessKind::kBessel:
        out.spec = ProcessSpec(Bessel{s.require_number("dim")}, x0);
        break;
      case ProcessKind::kRadialOU: {
        const double d = s.require_number("dim");
        out.spec = ProcessSpec(RadialOU{d, s.require_number("rate")}, x0);
        break;
      }
      case ProcessKind::kComplexOU: {
        const double a = s.require_number("rate");
        out.spec = ProcessSpec(ComplexOU{a, s.number("rotation", 0.0)}, x0);
        break;
      }
      case ProcessKind::kComplexBM:
        out.spec = ProcessSpec(ComplexBM{}, x0);
        break;
    }
  } catch (const ParameterError& e) {
    s.fail(s.path(), e.what());
  }
  s.finish();
  return out;
}

void require_positive_increasing(Section& s, const std::string& key,
                                 const std::vector<double>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || (i > 0 && !(xs[i] > xs[i - 1])))
      s.fail(s.field(key), "values must be positive and increasing");
  }
}

void check_names(Section& s, const std::string& key, const std::vector<std::string>& names,
                 const std::vector<NamedProcess>& processes) {
  for (const auto& n : names) {
    const bool found = std::any_of(processes.begin(), processes.end(),
                                   [&](const NamedProcess& p) { return p.name == n; });
    if (!found) s.fail(s.field(key), "unknown process '" + n + "'");
  }
}

std::vector<double> parse_times(Section& s) {
  if (s.has("times")) {
    auto t = s.numbers("times", {});
    if (t.empty()) s.fail(s.field("times"), "must not be empty");
    require_positive_increasing(s, "times", t);
    s.finish();
    return t;
  }
  const double from = s.number("from", 1e-2);
  const double to = s.number("to", 1e4);
  const auto per_decade = s.count("per_decade", 2);
  if (!(from > 0.0) || !(to >= from)) s.fail(s.path(), "expected 0 < from <= to");
  if (per_decade == 0) s.fail(s.field("per_decade"), "must be positive");
  s.finish();
  return log_grid(from, to, static_cast<int>(per_decade));
}

}  // namespace

nlohmann::json default_identity_pairs() {
  return json::array({
      {{"kind", "complex_ou_cir"}, {"rate", 1.0}, {"rotation", 0.5}, {"t", 1.0}},
      {{"kind", "cir_besq"}, {"level", 0.5}, {"rate", -1.0}, {"vol", 1.0}, {"t", 1.0}},
      {{"kind", "besq_additivity"}, {"dim_a", 0.5}, {"dim_b", 1.5}, {"t", 1.0}},
      {{"kind", "complex_bm_time_change"}, {"rate", 1.0}, {"rotation", 0.5}, {"t", 1.0}},
      {{"kind", "cir_self"}, {"level", 1.0}, {"rate", -2.0}, {"vol", 2.0}, {"t", 0.5}},
  });
}

GridPolicy GridSettings::policy(Monitor monitor) const {
  GridPolicy g = GridPolicy::per_unit(steps_per_unit, max_steps, min_segment_steps);
  g.monitor = monitor;
  return g;
}

double Thresholds::spread_for(const std::string& key) const {
  const auto it = spread_limits.find(key);
  return it == spread_limits.end() ? spread_limit : it->second;
}

NamedProcess parse_process(const nlohmann::json& j, const std::string& path) {
  Section s(j, path, "process");
  return parse_process_section(s);
}

RunConfig parse_config(std::string_view text, std::string_view origin_view) {
  const std::string origin(origin_view);
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Map the byte offset to a line number for the message.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError(origin + ":" + std::to_string(line) + ": syntax error: " + e.what());
  }
  Section s(root, "", origin);
  RunConfig c;
  if (!s.has("seed")) s.fail("seed", "is required (runs are never seeded from the clock)");
  c.seed = s.count("seed", 0);
  c.workers = static_cast<int>(s.count("workers", 1));
  c.n_paths = s.count("n_paths", c.n_paths);
  c.output = s.string("output", "");

  if (s.has("processes")) {
    const auto& list = s.raw("processes");
    if (!list.is_array()) s.fail("processes", "expected an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section p(list[i], "processes[" + std::to_string(i) + "]", origin);
      auto np = parse_process_section(p);
      if (!names.insert(np.name).second) p.fail(p.field("name"), "duplicate name '" + np.name + "'");
      c.processes.push_back(std::move(np));
    }
  }
  c.moderate = s.strings("moderate", {"pow:0.5", "pow:1", "pow:2", "powlog:1,1"});
  for (std::size_t i = 0; i < c.moderate.size(); ++i) {
    try {
      (void)ModerateFunction::parse(c.moderate[i]);
    } catch (const std::exception& e) {
      s.fail("moderate[" + std::to_string(i) + "]", e.what());
    }
  }
  if (s.has("time_grid")) {
    auto t = s.sub("time_grid");
    c.times = parse_times(t);
  } else {
    c.times = log_grid(1e-2, 1e4, 2);
  }
  if (s.has("grid")) {
    auto g = s.sub("grid");
    c.grid.steps_per_unit = g.number("steps_per_unit", c.grid.steps_per_unit);
    c.grid.max_steps = g.count("max_steps", c.grid.max_steps);
    c.grid.min_segment_steps = g.count("min_segment_steps", c.grid.min_segment_steps);
    if (!(c.grid.steps_per_unit > 0.0)) g.fail(g.field("steps_per_unit"), "must be positive");
    if (c.grid.max_steps == 0 || c.grid.min_segment_steps == 0)
      g.fail(g.path(), "step counts must be positive");
    g.finish();
  }
  if (s.has("thresholds")) {
    auto t = s.sub("thresholds");
    auto& th = c.thresholds;
    th.spread_limit = t.number("spread_limit", th.spread_limit);
    if (t.has("spread_limits")) {
      auto m = t.sub("spread_limits");
      const auto& raw = t.raw("spread_limits");
      for (auto it = raw.begin(); it != raw.end(); ++it)
        th.spread_limits[it.key()] = m.require_number(it.key());
      m.finish();
    }
    th.min_ratio = t.number("min_ratio", th.min_ratio);
    th.ks_level = t.number("ks_level", th.ks_level);
    th.ci_multiplier = t.number("ci_multiplier", th.ci_multiplier);
    th.max_censored = t.number("max_censored", th.max_censored);
    th.max_refinement_delta = t.number("max_refinement_delta", th.max_refinement_delta);
    th.z = t.number("z", th.z);
    if (!(th.ks_level > 0.0 && th.ks_level < 1.0)) t.fail(t.field("ks_level"), "must be in (0, 1)");
    t.finish();
  }

  if (s.has("checks")) {
    auto k = s.sub("checks");
    auto& ck = c.checks;
    if (k.has("envelope")) {
      auto e = k.sub("envelope");
      EnvelopeSettings v;
      v.processes = e.strings("processes", {});
      check_names(e, "processes", v.processes, c.processes);
      v.spot_check = e.boolean("spot_check", v.spot_check);
      v.spot_paths = e.count("spot_paths", v.spot_paths);
      v.growth = e.string("growth", v.growth);
      if (v.growth != "own" && v.growth != "sqrt")
        e.fail(e.field("growth"), "expected 'own' or 'sqrt'");
      e.finish();
      ck.envelope = v;
    }
    if (k.has("controllability")) {
      auto e = k.sub("controllability");
      ControllabilitySettings v;
      v.processes = e.strings("processes", {});
      check_names(e, "processes", v.processes, c.processes);
      v.times = e.numbers("times", v.times);
      require_positive_increasing(e, "times", v.times);
      v.levels = e.numbers("levels", v.levels);
      require_positive_increasing(e, "levels", v.levels);
      v.beta = e.optional_number("beta");
      v.gamma = e.optional_number("gamma");
      v.C = e.optional_number("C");
      v.n_paths = e.optional_count("n_paths");
      e.finish();
      ck.controllability = v;
    }
    if (k.has("good_lambda")) {
      auto e = k.sub("good_lambda");
      GoodLambdaSettings v;
      v.processes = e.strings("processes", {});
      check_names(e, "processes", v.processes, c.processes);
      v.deltas = e.numbers("deltas", v.deltas);
      v.levels = e.numbers("levels", v.levels);
      v.lambda_lo = e.number("lambda_lo", v.lambda_lo);
      v.lambda_hi = e.number("lambda_hi", v.lambda_hi);
      v.lambda_per_decade = static_cast<int>(e.count("lambda_per_decade", 16));
      v.beta = e.number("beta", v.beta);
      v.cap = e.number("cap", v.cap);
      v.orientation = e.string("orientation", v.orientation);
      if (v.orientation != "upper" && v.orientation != "lower" && v.orientation != "both")
        e.fail(e.field("orientation"), "expected 'upper', 'lower' or 'both'");
      v.n_paths = e.optional_count("n_paths");
      e.finish();
      ck.good_lambda = v;
    }
    if (k.has("lp_bound")) {
      auto e = k.sub("lp_bound");
      LpSettings v;
      v.dims = e.numbers("dims", v.dims);
      v.exponents = e.numbers("exponents", v.exponents);
      for (double p : v.exponents) {
        if (!(p > 0.0 && p < 1.0)) e.fail(e.field("exponents"), "the bound needs 0 < p < 1");
      }
      v.times = e.numbers("times", v.times);
      require_positive_increasing(e, "times", v.times);
      v.n_paths = e.optional_count("n_paths");
      e.finish();
      ck.lp_bound = v;
    }
    if (k.has("identities")) {
      auto e = k.sub("identities");
      IdentitySettings v;
      if (e.has("pairs")) {
        v.pairs = e.raw("pairs");
        if (!v.pairs.is_array()) e.fail(e.field("pairs"), "expected an array");
        for (std::size_t i = 0; i < v.pairs.size(); ++i) {
          Section q(v.pairs[i], e.field("pairs") + "[" + std::to_string(i) + "]", origin);
          const std::string kind = q.string("kind", "");
          const auto it = std::find_if(kIdentityKeys.begin(), kIdentityKeys.end(),
                                       [&](const auto& k) { return k.first == kind; });
          if (it == kIdentityKeys.end()) q.fail(q.field("kind"), "unknown pair kind '" + kind + "'");
          for (const auto& key : it->second) (void)q.require_number(key);
          if (!(q.require_number("t") > 0.0)) q.fail(q.field("t"), "must be positive");
          q.finish();
        }
      } else {
        v.pairs = default_identity_pairs();
      }
      v.n_paths = e.optional_count("n_paths");
      e.finish();
      ck.identities = v;
    }
    if (k.has("conformal")) {
      auto e = k.sub("conformal");
      ConformalSettings v;
      v.maps = e.strings("maps", v.maps);
      for (const auto& m : v.maps) {
        try {
          (void)parse_conformal_map(m);
        } catch (const ParameterError& err) {
          e.fail(e.field("maps"), err.what());
        }
      }
      v.times = e.numbers("times", {});
      require_positive_increasing(e, "times", v.times);
      v.identity_check = e.boolean("identity_check", v.identity_check);
      v.n_paths = e.optional_count("n_paths");
      e.finish();
      ck.conformal = v;
    }
    k.finish();
  }
  s.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

nlohmann::json resolved_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["n_paths"] = c.n_paths;
  if (!c.output.empty()) j["output"] = c.output;
  json procs = json::array();
  for (const auto& p : c.processes) {
    json q = process_json(p.spec);
    q["name"] = p.name;
    q["monitor"] = std::string(monitor_name(p.monitor));
    procs.push_back(std::move(q));
  }
  j["processes"] = std::move(procs);
  j["moderate"] = c.moderate;
  j["time_grid"] = {{"times", c.times}};
  j["grid"] = {{"steps_per_unit", c.grid.steps_per_unit},
               {"max_steps", c.grid.max_steps},
               {"min_segment_steps", c.grid.min_segment_steps}};
  const auto& th = c.thresholds;
  j["thresholds"] = {{"spread_limit", th.spread_limit},
                     {"spread_limits", th.spread_limits},
                     {"min_ratio", th.min_ratio},
                     {"ks_level", th.ks_level},
                     {"ci_multiplier", th.ci_multiplier},
                     {"max_censored", th.max_censored},
                     {"max_refinement_delta", th.max_refinement_delta},
                     {"z", th.z}};
  json checks = json::object();
  const auto& ck = c.checks;
  auto put_paths = [](json& o, const std::optional<std::size_t>& n) {
    if (n) o["n_paths"] = *n;
  };
  if (ck.envelope) {
    const auto& v = *ck.envelope;
    checks["envelope"] = {{"processes", v.processes},
                          {"spot_check", v.spot_check},
                          {"spot_paths", v.spot_paths},
                          {"growth", v.growth}};
  }
  if (ck.controllability) {
    const auto& v = *ck.controllability;
    json o = {{"processes", v.processes}, {"times", v.times}, {"levels", v.levels}};
    if (v.beta) o["beta"] = *v.beta;
    if (v.gamma) o["gamma"] = *v.gamma;
    if (v.C) o["C"] = *v.C;
    put_paths(o, v.n_paths);
    checks["controllability"] = std::move(o);
  }
  if (ck.good_lambda) {
    const auto& v = *ck.good_lambda;
    json o = {{"processes", v.processes},     {"deltas", v.deltas},
              {"levels", v.levels},           {"lambda_lo", v.lambda_lo},
              {"lambda_hi", v.lambda_hi},     {"lambda_per_decade", v.lambda_per_decade},
              {"beta", v.beta},               {"cap", v.cap},
              {"orientation", v.orientation}};
    put_paths(o, v.n_paths);
    checks["good_lambda"] = std::move(o);
  }
  if (ck.lp_bound) {
    const auto& v = *ck.lp_bound;
    json o = {{"dims", v.dims}, {"exponents", v.exponents}, {"times", v.times}};
    put_paths(o, v.n_paths);
    checks["lp_bound"] = std::move(o);
  }
  if (ck.identities) {
    json o = {{"pairs", ck.identities->pairs}};
    put_paths(o, ck.identities->n_paths);
    checks["identities"] = std::move(o);
  }
  if (ck.conformal) {
    const auto& v = *ck.conformal;
    json o = {{"maps", v.maps}, {"times", v.times}, {"identity_check", v.identity_check}};
    put_paths(o, v.n_paths);
    checks["conformal"] = std::move(o);
  }
  j["checks"] = std::move(checks);
  return j;
}

void override_paths(RunConfig& c, std::size_t n) {
  c.n_paths = n;
  auto& ck = c.checks;
  if (ck.envelope) ck.envelope->spot_paths = std::min(ck.envelope->spot_paths, n);
  if (ck.controllability) ck.controllability->n_paths = n;
  if (ck.good_lambda) ck.good_lambda->n_paths = n;
  if (ck.lp_bound) ck.lp_bound->n_paths = n;
  if (ck.identities) ck.identities->n_paths = n;
  if (ck.conformal) ck.conformal->n_paths = n;
}

}  // namespace maxineq
