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

// Command-line front end: run a config, print the catalog, replay a manifest.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "maxineq/analytic.hpp"
#include "maxineq/config.hpp"
#include "maxineq/moderate.hpp"
#include "maxineq/runner.hpp"

namespace fs = std::filesystem;
using namespace maxineq;

namespace {

struct CatalogEntry {
  const char* label;
  ProcessSpec spec;
  Monitor monitor;
  const char* result;
};

void print_catalog(std::ostream& out) {
  const CatalogEntry entries[] = {
      {"OU", ProcessSpec(OU{1.0}), Monitor::kModulus, "maximal inequality for OU, α > 0"},
      {"BMDrift", ProcessSpec(BMDrift{1.0}), Monitor::kModulus,
       "maximal inequality for BM with drift -μ, μ > 0"},
      {"ReflectedBMDrift", ProcessSpec(ReflectedBMDrift{1.0}), Monitor::kModulus,
       "maximal inequality for reflected BM with drift -μ, μ > 0"},
      {"CIR", ProcessSpec(CIR{1.0, -1.0, 1.0}), Monitor::kModulus,
       "maximal inequality for CIR, a, c > 0 and b < 0"},
      {"BESQ", ProcessSpec(BESQ{1.0}), Monitor::kModulus,
       "maximal inequality for squared Bessel, dimension α > 0"},
      {"Bessel", ProcessSpec(Bessel{1.0}), Monitor::kModulus,
       "Bessel corollary, F(sqrt(τ)) on the right"},
      {"RadialOU", ProcessSpec(RadialOU{2.0, 1.0}), Monitor::kModulus,
       "radial OU corollary, dimension α and rate β"},
      {"ComplexOU", ProcessSpec(ComplexOU{1.0, 0.0}), Monitor::kModulus,
       "complex OU corollary, rate a > 0"},
      {"ComplexBM", ProcessSpec(ComplexBM{}), Monitor::kModulus,
       "conformal martingale bound, |W|* against sqrt(τ)"},
      {"ComplexBM (normalized)", ProcessSpec(ComplexBM{}), Monitor::kNormalized,
       "conformal martingale bound, |W_t|/sqrt(1+t) maximum"},
  };
  out << "Processes:\n";
  for (const auto& e : entries) {
    const GrowthFunction g(e.spec, e.monitor);
    out << "  " << e.label << ": " << g.formula() << "  [" << e.result << "]\n";
  }
  out << "\nModerate functions:\n"
      << "  pow:p         F(x) = x^p, p > 0\n"
      << "  powlog:p,q    F(x) = x^p log^q(1+x), p > 0, q >= 0\n"
      << "  built in:";
  for (const auto& f : builtin_catalog()) out << ' ' << f.descriptor();
  out << "\n";
}

fs::path default_out(const fs::path& stem) {
  if (const char* root = std::getenv("MAXINEQ_OUT"); root && *root) return fs::path(root) / stem;
  return fs::path("maxineq-out") / stem;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and analytic checks of moderate maximal inequalities for diffusions"};
  app.set_version_flag("--version", std::string(MAXINEQ_VERSION));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::size_t> n_paths;
  std::string out;
  bool quiet = false;

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the checks selected by a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--workers", workers, "Worker threads (0: one per core)");
  run->add_option("--n-paths", n_paths, "Override the path count of every check");
  run->add_option("--out", out, "Output directory (default $MAXINEQ_OUT/<config name>)");
  run->add_flag("--quiet", quiet, "No progress lines");

  app.add_subcommand("catalog", "List processes, growth functions and moderate functions");

  std::string manifest_path;
  auto* rep = app.add_subcommand("replay", "Rerun a manifest and compare its tables");
  rep->add_option("manifest", manifest_path, "manifest.json of an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--workers", workers, "Worker threads (0: one per core)");
  rep->add_option("--out", out, "Output directory (default <manifest dir>/replay)");
  rep->add_flag("--quiet", quiet, "No progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("catalog")) {
      print_catalog(std::cout);
      return kExitPass;
    }
    std::ostream* log = quiet ? nullptr : &std::cerr;
    if (app.got_subcommand("run")) {
      RunConfig config = load_config(config_path);
      if (seed) config.seed = *seed;
      if (workers) config.workers = *workers;
      if (n_paths) override_paths(config, *n_paths);
      fs::path dir = !out.empty()             ? fs::path(out)
                     : !config.output.empty() ? fs::path(config.output)
                                              : default_out(fs::path(config_path).stem());
      const auto result = run_checks(config, dir, log);
      std::cout << result.manifest.string() << "\n";
      return result.exit_code;
    }
    const fs::path manifest(manifest_path);
    const fs::path dir = out.empty() ? manifest.parent_path() / "replay" : fs::path(out);
    const auto result = replay(manifest, dir, workers.value_or(1), log);
    std::cout << result.run.manifest.string() << "\n";
    if (!result.mismatched.empty()) {
      for (const auto& m : result.mismatched) std::cerr << "table differs: " << m << "\n";
      return kExitFail;
    }
    return result.run.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
