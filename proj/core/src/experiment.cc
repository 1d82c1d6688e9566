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

#include "torus_secagg/experiment.h"

#include <algorithm>
#include <fstream>
#include <random>

#include "torus_secagg/csv.h"
#include "torus_secagg/errors.h"
#include "torus_secagg/metrics.h"

namespace torus_secagg {
namespace {

constexpr std::uint64_t kRunDomain = 0x72756e2d73656564ULL;
constexpr std::uint64_t kPartitionDomain = 0x706172746974696fULL;
constexpr std::uint64_t kInitDomain = 0x696e69742d706172ULL;
constexpr std::uint64_t kSynthSeedOffset = 0x73796e7468ULL;

std::string JoinViolations(const std::vector<std::string>& violations) {
  std::string out = "invalid configuration:";
  for (const auto& v : violations) out += "\n  " + v;
  return out;
}

std::string ScalingSetting(const ExperimentConfig& cfg,
                           const std::optional<ScalingExpr>& fixed) {
  if (fixed) return fixed->ToString();
  return std::string(ToString(cfg.scaling));
}

AggregationConfig MakeAggregation(const ExperimentConfig& cfg, int num_clients,
                                  const std::optional<ScalingExpr>& fixed) {
  AggregationConfig agg;
  agg.exchange = cfg.mask_exchange;
  agg.torus.policy = cfg.scaling;
  agg.torus.range_bound = cfg.range_bound;
  agg.torus.precision =
      cfg.float_precision == 32 ? Precision::kFloat32 : Precision::kFloat64;
  if (fixed) agg.torus.scaling_factor = fixed->Evaluate(num_clients);
  agg.field = FieldParams(cfg.prime, cfg.precision_degree, cfg.fixed_point_base);
  return agg;
}

std::string OptionalField(bool present, const std::string& value) {
  return present ? value : std::string();
}

}  // namespace

ExperimentData LoadExperimentData(const ExperimentConfig& cfg) {
  if (cfg.dataset == "synth") {
    const Dataset all =
        SynthBlobs(cfg.synth_classes, cfg.train_samples + cfg.test_samples,
                   cfg.synth_features, cfg.synth_separation,
                   cfg.seed + kSynthSeedOffset);
    std::vector<std::size_t> train_idx(cfg.train_samples);
    std::vector<std::size_t> test_idx(cfg.test_samples);
    for (std::size_t i = 0; i < train_idx.size(); ++i) train_idx[i] = i;
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      test_idx[i] = cfg.train_samples + i;
    }
    return {all.Subset(train_idx), all.Subset(test_idx)};
  }
  const std::filesystem::path dir =
      cfg.mnist_dir.empty() ? DefaultMnistDir()
                            : std::filesystem::path(cfg.mnist_dir);
  MnistSplits splits = LoadMnist(dir, cfg.train_samples, cfg.test_samples);
  return {std::move(splits.train), std::move(splits.test)};
}

ModelSpec MakeModelSpec(const ExperimentConfig& cfg, const Dataset& train) {
  ModelSpec spec;
  spec.kind = cfg.model == "mlp" ? ModelKind::kMlp : ModelKind::kSoftmaxRegression;
  spec.num_features = train.num_features();
  spec.num_classes = train.num_classes();
  spec.hidden = spec.kind == ModelKind::kMlp ? cfg.hidden : 0;
  return spec;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  if (auto violations = ValidateConfig(cfg); !violations.empty()) {
    throw ConfigError(JoinViolations(violations));
  }
  return RunExperiment(cfg, LoadExperimentData(cfg));
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const ExperimentData& data) {
  if (auto violations = ValidateConfig(cfg); !violations.empty()) {
    throw ConfigError(JoinViolations(violations));
  }
  ExperimentResult result;
  result.config = cfg;
  if (!cfg.deterministic) {
    std::random_device entropy;
    result.config.seed =
        (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
  }
  const Seed256 root = Seed256::FromInteger(result.config.seed);
  const ModelSpec spec = MakeModelSpec(cfg, data.train);

  TrainConfig train;
  train.learning_rate = cfg.learning_rate;
  train.batch_size = cfg.batch_size;
  train.local_epochs = cfg.local_epochs;
  train.momentum = cfg.momentum;
  train.weight_decay = cfg.weight_decay;
  train.rounds = cfg.rounds;

  for (int k : cfg.clients) {
    for (AggregationMode mode : cfg.modes) {
      std::vector<std::optional<ScalingExpr>> settings{std::nullopt};
      if (mode == AggregationMode::kTorus &&
          cfg.scaling == ScalingPolicy::kFixed) {
        settings.assign(cfg.scaling_factors.begin(), cfg.scaling_factors.end());
      }
      for (const auto& fixed : settings) {
        ExperimentCell cell;
        cell.mode = mode;
        cell.num_clients = k;
        cell.dimension = spec.ParameterCount();
        if (mode == AggregationMode::kTorus) {
          cell.scaling_setting = ScalingSetting(cfg, fixed);
        }
        for (int run = 0; run < cfg.runs; ++run) {
          const Seed256 run_seed =
              DeriveSeed(root, {kRunDomain, static_cast<std::uint64_t>(run)});
          const Partition partition = PartitionIid(
              data.train.size(), k,
              DeriveSeed(run_seed, {kPartitionDomain,
                                    static_cast<std::uint64_t>(k)})
                  .words[0]);
          std::vector<Dataset> shards;
          shards.reserve(partition.shards.size());
          for (const auto& idx : partition.shards) {
            shards.push_back(data.train.Subset(idx));
          }
          FedAvgSetup setup;
          setup.spec = spec;
          setup.shards = shards;
          setup.test = &data.test;
          setup.initial =
              InitialParams(spec, DeriveSeed(run_seed, {kInitDomain}).words[0]);
          setup.mode = mode;
          setup.train = train;
          setup.aggregation = MakeAggregation(cfg, k, fixed);
          setup.seed = run_seed;
          setup.threads = cfg.threads;
          cell.runs.push_back(RunFedAvg(setup));
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

void WriteRoundsCsv(const ExperimentResult& result, std::ostream& out) {
  CsvWriter csv(out);
  csv.Row({"run", "round", "mode", "K", "m", "L_or_p", "d", "cosine_vs_plain",
           "accuracy", "overflow_count", "client_ops", "server_ops",
           "comm_symbols", "plain_accuracy", "L_setting", "R",
           "server_comm_symbols", "client_storage_symbols",
           "server_storage_symbols"});
  for (const auto& cell : result.cells) {
    const bool torus = cell.mode == AggregationMode::kTorus;
    const bool field = cell.mode == AggregationMode::kFiniteField;
    for (std::size_t run = 0; run < cell.runs.size(); ++run) {
      for (const auto& row : cell.runs[run].rows) {
        std::string l_or_p;
        if (torus) l_or_p = FormatDouble(row.scaling_factor);
        if (field) l_or_p = std::to_string(row.prime);
        const RoundCounters& c = row.counters;
        csv.Row({std::to_string(run + 1), std::to_string(row.round),
                 std::string(ToString(cell.mode)),
                 std::to_string(cell.num_clients),
                 std::to_string(cell.dimension), l_or_p,
                 OptionalField(field, std::to_string(row.precision_degree)),
                 FormatDouble(row.cosine_vs_plain), FormatDouble(row.accuracy),
                 std::to_string(row.overflow_count),
                 std::to_string(c.client_compute_ops()),
                 std::to_string(c.server_compute_ops()),
                 std::to_string(c.client_comm_symbols),
                 FormatDouble(row.plain_accuracy), cell.scaling_setting,
                 OptionalField(torus, FormatDouble(row.range_bound)),
                 std::to_string(c.server_comm_symbols),
                 std::to_string(c.client_storage_symbols),
                 std::to_string(c.server_storage_symbols)});
      }
    }
  }
}

void WriteSummaryCsv(const ExperimentResult& result, std::ostream& out) {
  CsvWriter csv(out);
  csv.Row({"mode", "K", "m", "L_setting", "p", "d", "rounds", "runs",
           "cosine_mean", "cosine_std", "cosine_min", "accuracy_mean",
           "accuracy_std", "plain_accuracy_mean", "plain_accuracy_std",
           "overflow_mean"});
  const ExperimentConfig& cfg = result.config;
  for (const auto& cell : result.cells) {
    std::vector<double> cosine, accuracy, plain, overflow;
    double cosine_min = 1.0;
    for (const auto& run : cell.runs) {
      if (run.rows.empty()) continue;
      const HistoryRow& last = run.rows.back();
      cosine.push_back(last.cosine_vs_plain);
      accuracy.push_back(last.accuracy);
      plain.push_back(last.plain_accuracy);
      overflow.push_back(static_cast<double>(last.overflow_count));
      for (const auto& row : run.rows) {
        cosine_min = std::min(cosine_min, row.cosine_vs_plain);
      }
    }
    if (cosine.empty()) continue;
    const bool field = cell.mode == AggregationMode::kFiniteField;
    const MetricReport c = Summarize(cosine);
    const MetricReport a = Summarize(accuracy);
    const MetricReport p = Summarize(plain);
    const MetricReport o = Summarize(overflow);
    csv.Row({std::string(ToString(cell.mode)), std::to_string(cell.num_clients),
             std::to_string(cell.dimension), cell.scaling_setting,
             OptionalField(field, std::to_string(cfg.prime)),
             OptionalField(field, std::to_string(cfg.precision_degree)),
             std::to_string(cfg.rounds), std::to_string(c.count),
             FormatDouble(c.mean), FormatDouble(c.stddev),
             FormatDouble(cosine_min), FormatDouble(a.mean),
             FormatDouble(a.stddev), FormatDouble(p.mean),
             FormatDouble(p.stddev), FormatDouble(o.mean)});
  }
}

void WritePlotCsv(const ExperimentResult& result, std::ostream& out) {
  CsvWriter csv(out);
  csv.Row({"mode", "K", "L_setting", "round", "accuracy_mean", "accuracy_std",
           "plain_accuracy_mean", "cosine_mean"});
  for (const auto& cell : result.cells) {
    const std::size_t rounds =
        cell.runs.empty() ? 0 : cell.runs.front().rows.size();
    for (std::size_t r = 0; r < rounds; ++r) {
      std::vector<double> accuracy, plain, cosine;
      for (const auto& run : cell.runs) {
        accuracy.push_back(run.rows[r].accuracy);
        plain.push_back(run.rows[r].plain_accuracy);
        cosine.push_back(run.rows[r].cosine_vs_plain);
      }
      const MetricReport a = Summarize(accuracy);
      csv.Row({std::string(ToString(cell.mode)),
               std::to_string(cell.num_clients), cell.scaling_setting,
               std::to_string(r + 1), FormatDouble(a.mean),
               FormatDouble(a.stddev), FormatDouble(Summarize(plain).mean),
               FormatDouble(Summarize(cosine).mean)});
    }
  }
}

void WriteReports(const ExperimentResult& result,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("rounds.csv");
    WriteRoundsCsv(result, f);
  }
  {
    auto f = open("summary.csv");
    WriteSummaryCsv(result, f);
  }
  {
    auto f = open("plot.csv");
    WritePlotCsv(result, f);
  }
  {
    auto f = open("config.txt");
    f << FormatExperimentConfig(result.config);
  }
}

}  // namespace torus_secagg
