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

#include <string>

#include "doctest.h"
#include "maxineq/config.hpp"
#include "maxineq/output.hpp"

using namespace maxineq;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config and defaults") {
  const auto c = parse_config(R"({"seed": 5})");
  CHECK(c.seed == 5);
  CHECK(c.n_paths == 100000);
  CHECK(c.times.size() == 13);
  CHECK(c.moderate.size() == 4);
  CHECK_FALSE(c.checks.envelope.has_value());
}

TEST_CASE("monitor forms") {
  const auto c = parse_config(R"({"seed": 1, "processes": [
      {"name": "v", "kind": "BMDrift", "drift": 1, "monitor": "upper"},
      {"name": "w", "kind": "BMDrift", "drift": 1},
      {"name": "z", "kind": "ComplexBM", "monitor": "normalized"}]})");
  CHECK(c.processes[0].monitor == Monitor::kUpper);
  CHECK(c.processes[1].monitor == Monitor::kModulus);
  CHECK(c.processes[2].monitor == Monitor::kNormalized);
  CHECK(resolved_json(c)["processes"][0]["monitor"] == "upper");
  CHECK(error_of(R"({"seed": 1, "processes": [{"kind": "ComplexOU", "rate": 1, "monitor": "upper"}]})")
            .find("real-valued") != std::string::npos);
}

TEST_CASE("the seed is mandatory") {
  CHECK(error_of("{}").find("seed") != std::string::npos);
}

TEST_CASE("unknown keys are errors with their field path") {
  CHECK(error_of(R"({"seed": 1, "tresholds": {}})").find("'tresholds'") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "thresholds": {"spred_limit": 3}})")
            .find("thresholds.spred_limit") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "processes": [{"kind": "OU", "rate": 1, "drift": 2}]})")
            .find("processes[0].drift") != std::string::npos);
}

TEST_CASE("syntax errors name the line") {
  CHECK(error_of("{\"seed\": 1,\n\n \"n_paths\": }").find("cfg:3:") != std::string::npos);
}

TEST_CASE("CIR with a nonnegative rate is rejected at parse") {
  const auto msg = error_of(
      R"({"seed": 1, "processes": [{"kind": "CIR", "level": 1, "rate": 1, "vol": 1}]})");
  CHECK(msg.find("b < 0") != std::string::npos);
  CHECK(msg.find("processes[0]") != std::string::npos);
  CHECK_FALSE(error_of(R"({"seed": 1, "processes": [{"kind": "CIR", "level": 1, "rate": 0, "vol": 1}]})")
                  .empty());
}

TEST_CASE("type and value errors") {
  CHECK(error_of(R"({"seed": -1})").find("seed") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "moderate": ["pow:x"]})").find("moderate[0]") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "processes": [{"kind": "OU", "rate": 1, "monitor": "normalized"}]})")
            .find("ComplexBM") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "processes": [{"name": "a", "kind": "ComplexBM"}, {"name": "a", "kind": "ComplexBM"}]})")
            .find("duplicate") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "checks": {"envelope": {"processes": ["nope"]}}})")
            .find("nope") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "checks": {"lp_bound": {"exponents": [1.5]}}})")
            .find("exponents") != std::string::npos);
  CHECK(error_of(R"({"seed": 1, "checks": {"identities": {"pairs": [{"kind": "cir_self", "t": 1}]}}})")
            .find("pairs[0].level") != std::string::npos);
}

TEST_CASE("time grid forms") {
  const auto a = parse_config(R"({"seed": 1, "time_grid": {"from": 0.1, "to": 10, "per_decade": 4}})");
  CHECK(a.times.size() == 9);
  CHECK(a.times.front() == 0.1);
  CHECK(a.times.back() == 10.0);
  const auto b = parse_config(R"({"seed": 1, "time_grid": {"times": [1, 2, 3]}})");
  CHECK(b.times == std::vector<double>{1, 2, 3});
  CHECK_THROWS_AS(parse_config(R"({"seed": 1, "time_grid": {"times": [2, 1]}})"), ConfigError);
}

TEST_CASE("resolved config round trips") {
  const std::string text = R"({
    "seed": 99, "n_paths": 1234, "workers": 3,
    "processes": [{"name": "z", "kind": "ComplexOU", "rate": 0.5, "rotation": 1, "x0": [1, -1]},
                  {"kind": "BESQ", "dim": 0.5, "x0": 2},
                  {"name": "w", "kind": "ComplexBM", "monitor": "normalized"}],
    "moderate": ["pow:1", "powlog:2,1"],
    "thresholds": {"spread_limits": {"z/pow:1": 7.5}, "ks_level": 0.05},
    "checks": {"envelope": {"growth": "sqrt"}, "controllability": {"C": 3},
               "good_lambda": {"orientation": "lower", "n_paths": 10},
               "lp_bound": {}, "identities": {}, "conformal": {"maps": ["identity"]}}
  })";
  const auto c = parse_config(text);
  CHECK(c.workers == 3);
  CHECK(c.thresholds.spread_for("z/pow:1") == 7.5);
  CHECK(c.thresholds.spread_for("other") == 50.0);
  CHECK(c.checks.identities->pairs.size() == 5);
  const auto j = resolved_json(c);
  CHECK_FALSE(j.contains("workers"));
  const auto again = parse_config(canonical_json(j));
  CHECK(canonical_json(resolved_json(again)) == canonical_json(j));
  CHECK(again.processes[0].spec.x0() == State{1.0, -1.0});
  CHECK(again.processes[2].monitor == Monitor::kNormalized);
}

TEST_CASE("path override reaches every check") {
  auto c = parse_config(R"({"seed": 1, "checks": {"controllability": {"n_paths": 5}, "lp_bound": {}}})");
  override_paths(c, 77);
  CHECK(c.n_paths == 77);
  CHECK(*c.checks.controllability->n_paths == 77);
  CHECK(*c.checks.lp_bound->n_paths == 77);
}
