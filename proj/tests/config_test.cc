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
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "torus_secagg/errors.h"

namespace torus_secagg {
namespace {

bool Mentions(const std::vector<std::string>& messages, const std::string& text) {
  return std::any_of(messages.begin(), messages.end(), [&](const std::string& m) {
    return m.find(text) != std::string::npos;
  });
}

TEST(ScalingExprTest, Parse) {
  EXPECT_EQ(ParseScalingExpr("1").Evaluate(10), 1.0);
  EXPECT_EQ(ParseScalingExpr("K").Evaluate(10), 10.0);
  EXPECT_EQ(ParseScalingExpr("10K").Evaluate(10), 100.0);
  EXPECT_EQ(ParseScalingExpr("100K").Evaluate(7), 700.0);
  EXPECT_EQ(ParseScalingExpr("0.5K").Evaluate(10), 5.0);
  EXPECT_EQ(ParseScalingExpr(" 2.5 ").Evaluate(10), 2.5);
  for (const char* bad : {"", "K10", "x", "1e", "KK"}) {
    EXPECT_THROW(ParseScalingExpr(bad), ConfigError) << bad;
  }
}

TEST(ScalingExprTest, ToStringRoundTrips) {
  for (const char* text : {"1", "K", "10K", "100K", "0.5K", "3.25"}) {
    const ScalingExpr e = ParseScalingExpr(text);
    EXPECT_EQ(e.ToString(), text);
    EXPECT_EQ(ParseScalingExpr(e.ToString()), e);
  }
}

TEST(ParseKeyValuesTest, CommentsAndWhitespace) {
  const auto kv = ParseKeyValues("# header\n a = 1 \n\nb=two words # trailing\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two words");
}

TEST(ParseKeyValuesTest, Errors) {
  EXPECT_THROW(ParseKeyValues("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(ParseKeyValues("just words\n"), ConfigError);
  EXPECT_THROW(ParseKeyValues(" = 3\n"), ConfigError);
}

TEST(ParseExperimentConfigTest, Values) {
  const ExperimentConfig cfg = ParseExperimentConfig(
      "modes = plain, torus, ff\nclients = 5, 10\nscaling = fixed\n"
      "scaling_factors = 1, K\nprime = 32767\nprecision_degree = 4\n"
      "range_bound = 2.5\nmask_exchange = seed\n");
  EXPECT_EQ(cfg.modes, (std::vector<AggregationMode>{
                           AggregationMode::kPlain, AggregationMode::kTorus,
                           AggregationMode::kFiniteField}));
  EXPECT_EQ(cfg.clients, (std::vector<int>{5, 10}));
  EXPECT_EQ(cfg.scaling, ScalingPolicy::kFixed);
  ASSERT_EQ(cfg.scaling_factors.size(), 2u);
  EXPECT_EQ(cfg.scaling_factors[1].Evaluate(10), 10.0);
  EXPECT_EQ(cfg.prime, 32767u);
  EXPECT_EQ(cfg.precision_degree, 4);
  EXPECT_EQ(cfg.range_bound, 2.5);
  EXPECT_EQ(cfg.mask_exchange, MaskExchange::kSeed);
  EXPECT_FALSE(ParseExperimentConfig("range_bound = auto\n").range_bound);
}

TEST(ParseExperimentConfigTest, Errors) {
  EXPECT_THROW(ParseExperimentConfig("colour = blue\n"), ConfigError);
  EXPECT_THROW(ParseExperimentConfig("clients = five\n"), ConfigError);
  EXPECT_THROW(ParseExperimentConfig("modes = paillier\n"), ConfigError);
  EXPECT_THROW(ParseExperimentConfig("preset = nope\n"), ConfigError);
}

TEST(ParseExperimentConfigTest, PresetKeyIsOverridden) {
  const ExperimentConfig cfg =
      ParseExperimentConfig("preset = table2\nclients = 7\nruns = 1\n");
  EXPECT_EQ(cfg.clients, std::vector<int>{7});
  EXPECT_EQ(cfg.runs, 1);
  EXPECT_EQ(cfg.modes, LoadPreset("table2").modes);
}

TEST(FormatExperimentConfigTest, RoundTrip) {
  for (const std::string& name : PresetNames()) {
    const ExperimentConfig cfg = LoadPreset(name);
    const std::string text = FormatExperimentConfig(cfg);
    EXPECT_EQ(FormatExperimentConfig(ParseExperimentConfig(text)), text) << name;
  }
}

TEST(ValidateConfigTest, Examples) {
  ExperimentConfig cfg;
  cfg.clients = {1};
  EXPECT_TRUE(Mentions(ValidateConfig(cfg), "K ≥ 2"));

  cfg = ExperimentConfig{};
  cfg.scaling = ScalingPolicy::kFixed;
  cfg.scaling_factors = {ScalingExpr{0.0, false}};
  EXPECT_TRUE(Mentions(ValidateConfig(cfg), "L > 0"));

  cfg = ExperimentConfig{};
  cfg.modes = {AggregationMode::kFiniteField};
  cfg.prime = 32768;
  EXPECT_TRUE(Mentions(ValidateConfig(cfg), "prime"));

  cfg = ExperimentConfig{};
  cfg.runs = 0;
  cfg.clients = {100};
  const auto messages = ValidateConfig(cfg);
  EXPECT_TRUE(Mentions(messages, "runs ≥ 1"));
  EXPECT_TRUE(Mentions(messages, "K ≤ 64"));

  EXPECT_TRUE(ValidateConfig(ExperimentConfig{}).empty());
}

TEST(PresetTest, AllBuiltInsAreValid) {
  const auto names = PresetNames();
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  for (const char* expected : {"table2", "table3", "table4", "table5",
                               "table5-mnist", "fig1", "fig1-small-field",
                               "smoke-synth"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end())
        << expected;
  }
  for (const std::string& name : names) {
    const auto problems = ValidateConfig(LoadPreset(name));
    EXPECT_TRUE(problems.empty()) << name << ": " << problems.front();
    EXPECT_FALSE(PresetSource(name).empty());
  }
  EXPECT_THROW(LoadPreset("table9"), ConfigError);
}

TEST(PresetTest, Contents) {
  const ExperimentConfig t2 = LoadPreset("table2");
  EXPECT_EQ(t2.clients, (std::vector<int>{5, 10, 15, 20, 30}));
  EXPECT_EQ(t2.prime, 2147483647u);
  EXPECT_EQ(t2.precision_degree, 7);

  const ExperimentConfig t4 = LoadPreset("table4");
  EXPECT_EQ(t4.prime, 32767u);
  EXPECT_EQ(t4.precision_degree, 4);

  const ExperimentConfig t5 = LoadPreset("table5");
  EXPECT_EQ(t5.clients, std::vector<int>{10});
  EXPECT_EQ(t5.scaling, ScalingPolicy::kFixed);
  std::vector<double> ls;
  for (const auto& e : t5.scaling_factors) ls.push_back(e.Evaluate(10));
  EXPECT_EQ(ls, (std::vector<double>{1, 10, 100, 1000}));

  // Aliases resolve to the same experiment.
  EXPECT_EQ(FormatExperimentConfig(LoadPreset("table3")).substr(
                FormatExperimentConfig(LoadPreset("table3")).find('\n')),
            FormatExperimentConfig(t2).substr(FormatExperimentConfig(t2).find('\n')));
  EXPECT_EQ(LoadPreset("fig1").rounds, 20);
  EXPECT_EQ(LoadPreset("fig1-small-field").prime, 32767u);
}

}  // namespace
}  // namespace torus_secagg
