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

#include "torus_secagg/metrics.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "torus_secagg/errors.h"

namespace torus_secagg {
namespace {

// Oracle: sup over a fine grid and just either side of each sample of
// |F_n(x) - x|, evaluated directly from the empirical CDF.
double KsBruteForce(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  auto ecdf_le = [&](double x) {
    return std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  };
  auto ecdf_lt = [&](double x) {
    return std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
  };
  double d = 0.0;
  for (double x : xs) {
    d = std::max(d, std::fabs(ecdf_le(x) / n - x));
    d = std::max(d, std::fabs(ecdf_lt(x) / n - x));
  }
  d = std::max(d, std::fabs(1.0 - ecdf_lt(1.0) / n));
  return d;
}

TEST(CosineTest, Examples) {
  const std::vector<double> a{1, 0}, b{0, 1}, c{-2, 0};
  EXPECT_EQ(CosineSimilarity(a, a), 1.0);
  EXPECT_EQ(CosineSimilarity(a, b), 0.0);
  EXPECT_EQ(CosineSimilarity(a, c), -1.0);
  EXPECT_NEAR(CosineSimilarity(std::vector<double>{1, 1}, a), std::sqrt(0.5), 1e-15);
}

TEST(CosineTest, ScaleInvariantAndBounded) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(30), b(30), a_scaled(30);
    for (double& x : a) x = dist(gen);
    for (double& x : b) x = dist(gen);
    const double s = std::exp(dist(gen) * 3);
    for (std::size_t i = 0; i < a.size(); ++i) a_scaled[i] = s * a[i];
    const double cos = CosineSimilarity(a, b);
    ASSERT_LE(std::fabs(cos), 1.0);
    ASSERT_NEAR(CosineSimilarity(a_scaled, b), cos, 1e-12);
    ASSERT_NEAR(CosineSimilarity(b, a), cos, 1e-15);
  }
}

TEST(CosineTest, Errors) {
  EXPECT_THROW(CosineSimilarity(std::vector<double>{1}, std::vector<double>{1, 2}),
               ShapeError);
  EXPECT_THROW(CosineSimilarity(std::vector<double>{0, 0}, std::vector<double>{1, 2}),
               MetricError);
}

TEST(KsTest, Examples) {
  EXPECT_DOUBLE_EQ(KsUniformStatistic(std::vector<double>(20, 0.5)), 0.5);
  EXPECT_DOUBLE_EQ(KsUniformStatistic(std::vector<double>{0.25, 0.75}), 0.25);
  for (int n : {1, 4, 100}) {
    std::vector<double> mid;
    for (int i = 1; i <= n; ++i) mid.push_back((2.0 * i - 1) / (2.0 * n));
    EXPECT_NEAR(KsUniformStatistic(mid), 0.5 / n, 1e-15);
  }
  EXPECT_NEAR(KsCriticalValue(10'000), 0.0163, 1e-12);
}

TEST(KsTest, Errors) {
  EXPECT_THROW(KsUniformStatistic(std::vector<double>{}), DomainError);
  EXPECT_THROW(KsUniformStatistic(std::vector<double>{0.5, 1.0}), DomainError);
  EXPECT_THROW(KsUniformStatistic(std::vector<double>{-0.1}), DomainError);
}

TEST(KsTest, MatchesBruteForceAndIgnoresOrder) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(1 + trial * 3);
    for (double& x : xs) x = dist(gen) * dist(gen);
    ASSERT_NEAR(KsUniformStatistic(xs), KsBruteForce(xs), 1e-14);
    std::vector<double> shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    ASSERT_EQ(KsUniformStatistic(shuffled), KsUniformStatistic(xs));
  }
}

TEST(KsTest, UniformBatchesPassAtExpectedRate) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  int passes = 0;
  for (int batch = 0; batch < 100; ++batch) {
    std::vector<double> xs(10'000);
    for (double& x : xs) x = dist(gen);
    passes += PassesKsUniformity(xs);
  }
  EXPECT_GE(passes, 95);
  std::vector<double> skewed(10'000);
  for (double& x : skewed) x = dist(gen) * dist(gen);
  EXPECT_FALSE(PassesKsUniformity(skewed));
}

TEST(PearsonTest, Examples) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_NEAR(PearsonCorrelation(x, std::vector<double>{2, 4, 6, 8}), 1.0, 1e-15);
  EXPECT_NEAR(PearsonCorrelation(x, std::vector<double>{4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(PearsonCorrelation(x, std::vector<double>{1, -1, -1, 1}), 0.0, 1e-15);
}

TEST(PearsonTest, IndependentUniformsAreUncorrelated) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> x(10'000), y(10'000);
  for (double& v : x) v = dist(gen);
  for (double& v : y) v = dist(gen);
  EXPECT_LT(std::fabs(PearsonCorrelation(x, y)), 0.05);
}

TEST(PearsonTest, Errors) {
  EXPECT_THROW(PearsonCorrelation(std::vector<double>{1, 2},
                                  std::vector<double>{1, 2}),
               ShapeError);
  EXPECT_THROW(PearsonCorrelation(std::vector<double>{1, 2, 3},
                                  std::vector<double>{1, 2}),
               ShapeError);
  EXPECT_THROW(PearsonCorrelation(std::vector<double>{1, 1, 1},
                                  std::vector<double>{1, 2, 3}),
               MetricError);
}

TEST(ChiSquareTest, Examples) {
  EXPECT_EQ(ChiSquareUniformStatistic(std::vector<std::uint64_t>{5, 5, 5}), 0.0);
  // Expected 5 per bin: (5^2 + 5^2) / 5.
  EXPECT_DOUBLE_EQ(ChiSquareUniformStatistic(std::vector<std::uint64_t>{10, 0}), 10.0);
  EXPECT_THROW(ChiSquareUniformStatistic(std::vector<std::uint64_t>{3}), DomainError);
  EXPECT_THROW(ChiSquareUniformStatistic(std::vector<std::uint64_t>{0, 0}),
               DomainError);
}

TEST(SummarizeTest, Examples) {
  const MetricReport one = Summarize(std::vector<double>{1.0});
  EXPECT_EQ(one.mean, 1.0);
  EXPECT_EQ(one.stddev, 0.0);
  const MetricReport two = Summarize(std::vector<double>{0.0, 1.0});
  EXPECT_EQ(two.mean, 0.5);
  EXPECT_EQ(two.stddev, 0.5);
  EXPECT_EQ(two.count, 2u);
  EXPECT_EQ(two.values, (std::vector<double>{0.0, 1.0}));
  EXPECT_THROW(Summarize(std::vector<double>{}), DomainError);
}

}  // namespace
}  // namespace torus_secagg
