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

#include "torus_secagg/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "torus_secagg/csv.h"
#include "torus_secagg/errors.h"

namespace torus_secagg {
namespace {

struct PresetEntry {
  const char* name;
  const char* body;
};

constexpr PresetEntry kPresets[] = {
#include "torus_secagg/builtin_presets.inc"
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitList(std::string_view s) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = s.find(',');
    const std::string_view item = Trim(s.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return items;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value,
                           std::string_view expected) {
  throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                    std::string(value) + "' as " + std::string(expected));
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) BadValue(key, value, "a number");
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  BadValue(key, value, "a boolean");
}

const PresetEntry* FindPreset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return &p;
  }
  return nullptr;
}

}  // namespace

std::string ScalingExpr::ToString() const {
  std::ostringstream out;
  if (!(times_k && coefficient == 1.0)) out << FormatDouble(coefficient);
  if (times_k) out << 'K';
  return out.str();
}

ScalingExpr ParseScalingExpr(std::string_view text) {
  text = Trim(text);
  ScalingExpr expr;
  if (!text.empty() && text.back() == 'K') {
    expr.times_k = true;
    text.remove_suffix(1);
    text = Trim(text);
    if (text.empty()) return expr;
  }
  if (text.empty()) throw ConfigError("empty scaling factor");
  expr.coefficient = ParseNumber<double>("scaling_factors", text);
  return expr;
}

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> kv;
  int line_number = 0;
  while (!text.empty()) {
    ++line_number;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text.remove_prefix(newline == std::string_view::npos ? text.size()
                                                         : newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": empty key");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

ExperimentConfig ApplyKeyValues(ExperimentConfig cfg,
                                const std::map<std::string, std::string>& kv) {
  if (auto it = kv.find("preset"); it != kv.end()) cfg = LoadPreset(it->second);
  for (const auto& [key, value] : kv) {
    const std::string_view v = value;
    if (key == "preset") {
      continue;
    } else if (key == "name") {
      cfg.name = value;
    } else if (key == "dataset") {
      cfg.dataset = value;
    } else if (key == "mnist_dir") {
      cfg.mnist_dir = value;
    } else if (key == "train_samples") {
      cfg.train_samples = ParseNumber<std::size_t>(key, v);
    } else if (key == "test_samples") {
      cfg.test_samples = ParseNumber<std::size_t>(key, v);
    } else if (key == "synth_classes") {
      cfg.synth_classes = ParseNumber<int>(key, v);
    } else if (key == "synth_features") {
      cfg.synth_features = ParseNumber<std::size_t>(key, v);
    } else if (key == "synth_separation") {
      cfg.synth_separation = ParseNumber<double>(key, v);
    } else if (key == "model") {
      cfg.model = value;
    } else if (key == "hidden") {
      cfg.hidden = ParseNumber<std::size_t>(key, v);
    } else if (key == "modes") {
      cfg.modes.clear();
      for (auto item : SplitList(v)) {
        cfg.modes.push_back(ParseAggregationMode(item));
      }
    } else if (key == "clients") {
      cfg.clients.clear();
      for (auto item : SplitList(v)) {
        cfg.clients.push_back(ParseNumber<int>(key, item));
      }
    } else if (key == "scaling") {
      cfg.scaling = ParseScalingPolicy(v);
    } else if (key == "scaling_factors") {
      cfg.scaling_factors.clear();
      for (auto item : SplitList(v)) {
        cfg.scaling_factors.push_back(ParseScalingExpr(item));
      }
    } else if (key == "range_bound") {
      if (v == "auto") {
        cfg.range_bound.reset();
      } else {
        cfg.range_bound = ParseNumber<double>(key, v);
      }
    } else if (key == "prime") {
      cfg.prime = ParseNumber<std::uint64_t>(key, v);
    } else if (key == "precision_degree") {
      cfg.precision_degree = ParseNumber<int>(key, v);
    } else if (key == "fixed_point_base") {
      if (v == "decimal") {
        cfg.fixed_point_base = FixedPointBase::kDecimal;
      } else if (v == "binary") {
        cfg.fixed_point_base = FixedPointBase::kBinary;
      } else {
        BadValue(key, v, "decimal or binary");
      }
    } else if (key == "mask_exchange") {
      if (v == "vector") {
        cfg.mask_exchange = MaskExchange::kFullVector;
      } else if (v == "seed") {
        cfg.mask_exchange = MaskExchange::kSeed;
      } else {
        BadValue(key, v, "vector or seed");
      }
    } else if (key == "float_precision") {
      cfg.float_precision = ParseNumber<int>(key, v);
    } else if (key == "rounds") {
      cfg.rounds = ParseNumber<int>(key, v);
    } else if (key == "runs") {
      cfg.runs = ParseNumber<int>(key, v);
    } else if (key == "learning_rate") {
      cfg.learning_rate = ParseNumber<double>(key, v);
    } else if (key == "batch_size") {
      cfg.batch_size = ParseNumber<std::size_t>(key, v);
    } else if (key == "local_epochs") {
      cfg.local_epochs = ParseNumber<int>(key, v);
    } else if (key == "momentum") {
      cfg.momentum = ParseNumber<double>(key, v);
    } else if (key == "weight_decay") {
      cfg.weight_decay = ParseNumber<double>(key, v);
    } else if (key == "seed") {
      cfg.seed = ParseNumber<std::uint64_t>(key, v);
    } else if (key == "deterministic") {
      cfg.deterministic = ParseBool(key, v);
    } else if (key == "threads") {
      cfg.threads = ParseNumber<int>(key, v);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig ParseExperimentConfig(std::string_view text) {
  return ApplyKeyValues(ExperimentConfig{}, ParseKeyValues(text));
}

std::string FormatExperimentConfig(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto join = [](const auto& items, auto fn) {
    std::string s;
    for (const auto& item : items) {
      if (!s.empty()) s += ", ";
      s += fn(item);
    }
    return s;
  };
  out << "name = " << cfg.name << '\n'
      << "dataset = " << cfg.dataset << '\n';
  if (!cfg.mnist_dir.empty()) out << "mnist_dir = " << cfg.mnist_dir << '\n';
  out << "train_samples = " << cfg.train_samples << '\n'
      << "test_samples = " << cfg.test_samples << '\n'
      << "synth_classes = " << cfg.synth_classes << '\n'
      << "synth_features = " << cfg.synth_features << '\n'
      << "synth_separation = " << FormatDouble(cfg.synth_separation) << '\n'
      << "model = " << cfg.model << '\n'
      << "hidden = " << cfg.hidden << '\n'
      << "modes = "
      << join(cfg.modes, [](AggregationMode m) { return std::string(ToString(m)); })
      << '\n'
      << "clients = "
      << join(cfg.clients, [](int k) { return std::to_string(k); }) << '\n'
      << "scaling = " << ToString(cfg.scaling) << '\n';
  if (!cfg.scaling_factors.empty()) {
    out << "scaling_factors = "
        << join(cfg.scaling_factors,
                [](const ScalingExpr& e) { return e.ToString(); })
        << '\n';
  }
  out << "range_bound = "
      << (cfg.range_bound ? FormatDouble(*cfg.range_bound) : "auto") << '\n'
      << "prime = " << cfg.prime << '\n'
      << "precision_degree = " << cfg.precision_degree << '\n'
      << "fixed_point_base = "
      << (cfg.fixed_point_base == FixedPointBase::kDecimal ? "decimal"
                                                           : "binary")
      << '\n'
      << "mask_exchange = "
      << (cfg.mask_exchange == MaskExchange::kSeed ? "seed" : "vector") << '\n'
      << "float_precision = " << cfg.float_precision << '\n'
      << "rounds = " << cfg.rounds << '\n'
      << "runs = " << cfg.runs << '\n'
      << "learning_rate = " << FormatDouble(cfg.learning_rate) << '\n'
      << "batch_size = " << cfg.batch_size << '\n'
      << "local_epochs = " << cfg.local_epochs << '\n'
      << "momentum = " << FormatDouble(cfg.momentum) << '\n'
      << "weight_decay = " << FormatDouble(cfg.weight_decay) << '\n'
      << "seed = " << cfg.seed << '\n'
      << "deterministic = " << (cfg.deterministic ? "true" : "false") << '\n'
      << "threads = " << cfg.threads << '\n'
      << "output = " << cfg.output << '\n';
  return out.str();
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str());
}

std::vector<std::string> ValidateConfig(const ExperimentConfig& cfg) {
  std::vector<std::string> v;
  auto require = [&v](bool ok, std::string message) {
    if (!ok) v.push_back(std::move(message));
  };
  require(cfg.dataset == "mnist" || cfg.dataset == "synth",
          "dataset: one of mnist, synth");
  require(cfg.model == "softmax" || cfg.model == "mlp",
          "model: one of softmax, mlp");
  require(cfg.model != "mlp" || cfg.hidden >= 1, "hidden: width ≥ 1");
  require(!cfg.modes.empty(), "modes: at least one mode");
  require(!cfg.clients.empty(), "clients: at least one K");
  for (int k : cfg.clients) {
    require(k >= 2, "clients: K ≥ 2 (got " + std::to_string(k) + ")");
    require(k <= 64, "clients: K ≤ 64 (got " + std::to_string(k) + ")");
    require(static_cast<std::size_t>(std::max(k, 0)) <= cfg.train_samples,
            "train_samples: at least one sample per client");
  }
  require(cfg.runs >= 1, "runs: runs ≥ 1");
  require(cfg.rounds >= 0, "rounds: rounds ≥ 0");
  require(cfg.test_samples >= 1, "test_samples: ≥ 1");
  require(cfg.learning_rate >= 0.0, "learning_rate: λ ≥ 0");
  require(cfg.batch_size >= 1, "batch_size: ≥ 1");
  require(cfg.local_epochs >= 1, "local_epochs: ≥ 1");
  require(cfg.momentum >= 0.0 && cfg.momentum < 1.0, "momentum: in [0, 1)");
  require(cfg.weight_decay >= 0.0, "weight_decay: ≥ 0");
  require(cfg.float_precision == 32 || cfg.float_precision == 64,
          "float_precision: 32 or 64");
  require(cfg.threads >= 1, "threads: ≥ 1");
  if (cfg.dataset == "synth") {
    require(cfg.synth_classes >= 2, "synth_classes: ≥ 2");
    require(cfg.synth_features >= 1, "synth_features: ≥ 1");
  }
  const bool torus = std::find(cfg.modes.begin(), cfg.modes.end(),
                               AggregationMode::kTorus) != cfg.modes.end();
  const bool field = std::find(cfg.modes.begin(), cfg.modes.end(),
                               AggregationMode::kFiniteField) != cfg.modes.end();
  if (torus) {
    if (cfg.scaling == ScalingPolicy::kFixed) {
      require(!cfg.scaling_factors.empty(),
              "scaling_factors: required when scaling = fixed");
      for (const auto& e : cfg.scaling_factors) {
        require(e.coefficient > 0.0, "scaling_factors: L > 0");
      }
    }
    if (cfg.range_bound) {
      require(*cfg.range_bound > 0.0, "range_bound: R > 0");
    }
  }
  if (field) {
    require(cfg.prime >= 3 && cfg.prime < (std::uint64_t{1} << 40) &&
                cfg.prime % 2 == 1,
            "prime: p odd, 3 ≤ p < 2^40");
    const int max_d =
        cfg.fixed_point_base == FixedPointBase::kDecimal ? 18 : 62;
    require(cfg.precision_degree >= 0 && cfg.precision_degree <= max_d,
            "precision_degree: 0 ≤ d ≤ " + std::to_string(max_d));
  }
  return v;
}

std::vector<std::string> PresetNames() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  std::sort(names.begin(), names.end());
  return names;
}

std::string PresetSource(std::string_view name) {
  const PresetEntry* p = FindPreset(name);
  if (p == nullptr) {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return p->body;
}

ExperimentConfig LoadPreset(std::string_view name) {
  auto kv = ParseKeyValues(PresetSource(name));
  // A preset may extend one other preset, which itself may not extend.
  if (auto it = kv.find("preset"); it != kv.end()) {
    if (ParseKeyValues(PresetSource(it->second)).count("preset") != 0) {
      throw ConfigError("preset '" + std::string(name) + "' nests too deeply");
    }
  }
  ExperimentConfig cfg = ApplyKeyValues(ExperimentConfig{}, kv);
  if (kv.count("name") == 0) cfg.name = std::string(name);
  return cfg;
}

}  // namespace torus_secagg
