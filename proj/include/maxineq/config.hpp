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
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "maxineq/process.hpp"
#include "maxineq/sde.hpp"

namespace maxineq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedProcess {
  std::string name;
  ProcessSpec spec;
  Monitor monitor = Monitor::kModulus;
};

struct GridSettings {
  double steps_per_unit = 4096.0;
  std::size_t max_steps = std::size_t{1} << 14;
  std::size_t min_segment_steps = 32;

  GridPolicy policy(Monitor monitor = Monitor::kModulus) const;
};

struct Thresholds {
  double spread_limit = 50.0;
  // Per-check overrides keyed "<process>/<descriptor>" for envelopes and
  // "<map>/<plain|normalized>/<descriptor>" for conformal scenarios.
  std::map<std::string, double> spread_limits;
  double min_ratio = 1e-3;
  double ks_level = 0.01;
  double ci_multiplier = 4.0;
  double max_censored = 0.01;
  double max_refinement_delta = 0.05;
  double z = 1.959963984540054;

  double spread_for(const std::string& key) const;
};

struct EnvelopeSettings {
  std::vector<std::string> processes;  // empty: all
  bool spot_check = true;
  std::size_t spot_paths = 10000;
  std::string growth = "own";  // or "sqrt" to test against g(t) = sqrt(t)
};

struct ControllabilitySettings {
  std::vector<std::string> processes;
  std::vector<double> times{0.01, 0.1, 1.0, 10.0};
  std::vector<double> levels{0.1, 0.3, 1.0, 3.0};
  std::optional<double> beta, gamma, C;
  std::optional<std::size_t> n_paths;
};

struct GoodLambdaSettings {
  std::vector<std::string> processes;
  std::vector<double> deltas{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> levels;  // hitting levels; empty: 16 log-spaced in [0.05, 2]
  double lambda_lo = 1e-2;
  double lambda_hi = 1e2;
  int lambda_per_decade = 16;
  double beta = 2.0;
  double cap = 1e4;
  std::string orientation = "both";  // "upper", "lower" or "both"
  std::optional<std::size_t> n_paths;
};

struct LpSettings {
  std::vector<double> dims{1.0, 2.0};
  std::vector<double> exponents{0.25, 0.5};
  std::vector<double> times{0.5, 1.0, 4.0};
  std::optional<std::size_t> n_paths;
};

struct IdentitySettings {
  // Each entry: {"kind": "complex_ou_cir" | "cir_besq" | "besq_additivity" |
  // "complex_bm_time_change" | "cir_self", parameters..., "t": ...}.
  nlohmann::json pairs = nlohmann::json::array();
  std::optional<std::size_t> n_paths;
};

struct ConformalSettings {
  std::vector<std::string> maps{"square"};
  std::vector<double> times;  // empty: 10^-2 .. 10^2 at 2 per decade
  bool identity_check = true;
  std::optional<std::size_t> n_paths;
};

struct CheckSelection {
  std::optional<EnvelopeSettings> envelope;
  std::optional<ControllabilitySettings> controllability;
  std::optional<GoodLambdaSettings> good_lambda;
  std::optional<LpSettings> lp_bound;
  std::optional<IdentitySettings> identities;
  std::optional<ConformalSettings> conformal;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t n_paths = 100000;
  std::string output;  // optional output directory
  std::vector<NamedProcess> processes;
  std::vector<std::string> moderate;
  std::vector<double> times;
  GridSettings grid;
  CheckSelection checks;
  Thresholds thresholds;
};

// Parses the JSON config schema; unknown keys, missing seed and invalid
// parameters are errors naming the line (syntax) or field path (schema).
RunConfig parse_config(std::string_view text, std::string_view origin = "config");
RunConfig load_config(const std::filesystem::path& path);

// Fully resolved config (defaults filled in) that parses back to the same run.
// The worker count is left out: it never changes results.
nlohmann::json resolved_json(const RunConfig& config);

// Applies a --n-paths override to the run and every check.
void override_paths(RunConfig& config, std::size_t n_paths);

NamedProcess parse_process(const nlohmann::json& j, const std::string& path);

// One of each identity pair kind, used when a config names none.
nlohmann::json default_identity_pairs();

}  // namespace maxineq
