// Copyright 2026 The torus_secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner.
//
//   torus-secagg run --preset table5 --runs 3 --out out/table5
//   torus-secagg run --config my.conf --seed 7
//   torus-secagg list-presets
//   torus-secagg show-preset table2
//   torus-secagg validate --config my.conf
//
// Exit codes: 0 success, 1 invalid configuration or unknown preset,
// 2 dataset missing, 3 any other runtime failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "torus_secagg/config.h"
#include "torus_secagg/errors.h"
#include "torus_secagg/experiment.h"

namespace {

using namespace torus_secagg;

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

struct Source {
  std::string preset;
  std::string config_path;
};

void AddSourceOptions(CLI::App* cmd, Source& src) {
  auto* preset = cmd->add_option("--preset", src.preset, "Built-in preset name");
  auto* config =
      cmd->add_option("--config", src.config_path, "key = value config file");
  preset->excludes(config);
  config->excludes(preset);
}

ExperimentConfig Resolve(const Source& src) {
  if (!src.preset.empty()) return LoadPreset(src.preset);
  if (!src.config_path.empty()) return LoadExperimentConfig(src.config_path);
  throw ConfigError("one of --preset or --config is required");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure aggregation on the torus: experiment runner"};
  app.require_subcommand(1);

  Source run_src;
  std::optional<std::string> out_dir;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<int> precision;
  std::optional<int> threads;
  std::optional<int> rounds;
  bool deterministic = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV reports");
  AddSourceOptions(run, run_src);
  run->add_option("--out", out_dir, "Output directory (default: config 'output')");
  run->add_option("--runs", runs, "Independent runs")->check(CLI::PositiveNumber);
  run->add_option("--rounds", rounds, "Federated rounds per run");
  run->add_option("--seed", seed, "Root seed");
  run->add_flag("--deterministic", deterministic,
                "Force deterministic mode (fixed seeds)");
  run->add_option("--precision", precision, "Torus float width")
      ->check(CLI::IsMember({32, 64}));
  run->add_option("--threads", threads, "Client training threads")
      ->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "Do not print the summary table");

  auto* list = app.add_subcommand("list-presets", "List built-in presets");

  std::string show_name;
  auto* show = app.add_subcommand("show-preset", "Print a preset's source");
  show->add_option("name", show_name)->required();

  Source validate_src;
  auto* validate = app.add_subcommand("validate", "Check a configuration");
  AddSourceOptions(validate, validate_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) {
      for (const auto& name : PresetNames()) std::cout << name << '\n';
      return 0;
    }
    if (*show) {
      std::cout << PresetSource(show_name);
      return 0;
    }
    if (*validate) {
      const auto violations = ValidateConfig(Resolve(validate_src));
      for (const auto& v : violations) std::cout << v << '\n';
      if (violations.empty()) std::cout << "ok\n";
      return violations.empty() ? 0 : kExitConfig;
    }

    ExperimentConfig cfg = Resolve(run_src);
    if (out_dir) cfg.output = *out_dir;
    if (runs) cfg.runs = *runs;
    if (rounds) cfg.rounds = *rounds;
    if (seed) cfg.seed = *seed;
    if (deterministic) cfg.deterministic = true;
    if (precision) cfg.float_precision = *precision;
    if (threads) cfg.threads = *threads;
    if (const auto violations = ValidateConfig(cfg); !violations.empty()) {
      std::cerr << "invalid configuration:\n";
      for (const auto& v : violations) std::cerr << "  " << v << '\n';
      return kExitConfig;
    }

    const ExperimentResult result = RunExperiment(cfg);
    WriteReports(result, cfg.output);
    if (!quiet) WriteSummaryCsv(result, std::cout);
    std::cerr << "wrote " << cfg.output << "/{rounds,summary,plot}.csv\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what()
              << "\n(set TORUS_SECAGG_MNIST_DIR or mnist_dir to a directory "
                 "with the four MNIST IDX files)\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
