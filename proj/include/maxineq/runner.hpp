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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "maxineq/config.hpp"
#include "maxineq/verify.hpp"

namespace maxineq {

// Exit codes shared by `run` and `replay`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 3;

struct CheckOutcome {
  std::string id;
  Verdict verdict = Verdict::kPass;
  std::string reason;
};

struct RunResult {
  std::vector<CheckOutcome> checks;
  int exit_code = kExitPass;
  std::filesystem::path manifest;
};

// Runs every selected check in order and writes reports/, tables/, plots/
// and finally manifest.json under `out`. Progress lines go to `log` if set.
RunResult run_checks(const RunConfig& config, const std::filesystem::path& out,
                     std::ostream* log = nullptr);

// 0 when everything passed, 1 on any failure, otherwise 2.
int exit_code_for(const std::vector<CheckOutcome>& checks);

// The resolved config stored in a manifest.
RunConfig config_from_manifest(const std::filesystem::path& manifest);

struct ReplayResult {
  RunResult run;
  std::vector<std::string> mismatched;  // table files whose bytes differ
};

// Reruns a manifest into `out` and compares every table byte for byte.
ReplayResult replay(const std::filesystem::path& manifest, const std::filesystem::path& out,
                    int workers, std::ostream* log = nullptr);

// "pow:0.5" -> "pow_0.5", safe for file names.
std::string file_stem(std::string_view text);

}  // namespace maxineq
