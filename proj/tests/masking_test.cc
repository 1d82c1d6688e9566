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

#include "torus_secagg/masking.h"

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "torus_secagg/errors.h"
#include "torus_secagg/metrics.h"

namespace torus_secagg {
namespace {

// Distance on the circle of circumference 1.
double TorusDistance(double a, double b) {
  const double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

PairwiseMasks HandMasks() {
  return PairwiseMasks::FromMap(3, 1,
                                {{{1, 2}, TorusVector({0.2})},
                                 {{1, 3}, TorusVector({0.5})},
                                 {{2, 3}, TorusVector({0.9})}});
}

TEST(GeneratePairwiseMasksTest, PairCount) {
  const MaskSeed seed = MaskSeed::FromInteger(1);
  const PairwiseMasks two = GeneratePairwiseMasks(2, 3, seed);
  EXPECT_EQ(two.pair_count(), 1u);
  EXPECT_EQ(two.at(1, 2).size(), 3u);
  for (double v : two.at(1, 2).values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_EQ(GeneratePairwiseMasks(5, 1, seed).pair_count(), 10u);
}

TEST(GeneratePairwiseMasksTest, InvalidArguments) {
  const MaskSeed seed = MaskSeed::FromInteger(1);
  EXPECT_THROW(GeneratePairwiseMasks(1, 3, seed), ConfigError);
  EXPECT_THROW(GeneratePairwiseMasks(3, 0, seed), ConfigError);
  const PairwiseMasks masks = GeneratePairwiseMasks(3, 2, seed);
  EXPECT_THROW(masks.at(2, 1), DomainError);
  EXPECT_THROW(masks.at(1, 4), DomainError);
  EXPECT_THROW(masks.at(0, 2), DomainError);
}

TEST(GeneratePairwiseMasksTest, DeterministicPerSeedAndPair) {
  const MaskSeed seed = MaskSeed::FromInteger(42);
  const PairwiseMasks a = GeneratePairwiseMasks(4, 16, seed);
  const PairwiseMasks b = GeneratePairwiseMasks(4, 16, seed);
  const PairwiseMasks c = GeneratePairwiseMasks(6, 16, seed);
  for (int k = 1; k <= 4; ++k) {
    for (int j = k + 1; j <= 4; ++j) {
      EXPECT_EQ(a.at(k, j), b.at(k, j));
      // A pair's mask depends only on (root, k, j), not on K.
      EXPECT_EQ(a.at(k, j), c.at(k, j));
    }
  }
  EXPECT_NE(a.at(1, 2), a.at(1, 3));
  EXPECT_NE(a.at(1, 2), GeneratePairwiseMasks(4, 16, MaskSeed::FromInteger(43)).at(1, 2));
  EXPECT_NE(a.at(1, 2), GeneratePairwiseMasks(4, 16, seed.ForRound(1)).at(1, 2));
}

TEST(GeneratePairwiseMasksTest, EntriesPassKsUniformity) {
  const PairwiseMasks masks =
      GeneratePairwiseMasks(5, 10'000, MaskSeed::FromInteger(7));
  std::vector<double> pooled;
  for (int k = 1; k <= 5; ++k) {
    for (int j = k + 1; j <= 5; ++j) {
      const auto v = masks.at(k, j).values();
      pooled.insert(pooled.end(), v.begin(), v.end());
    }
  }
  ASSERT_EQ(pooled.size(), 100'000u);
  EXPECT_LT(KsUniformStatistic(pooled), KsCriticalValue(pooled.size()));
}

TEST(GeneratePairwiseMasksTest, EntriesUseFullDoubleResolution) {
  const PairwiseMasks masks = GeneratePairwiseMasks(2, 1000, MaskSeed::FromInteger(9));
  int below_float_grid = 0;
  for (double v : masks.at(1, 2).values()) {
    // Exactly representable on a 2^-53 grid.
    ASSERT_EQ(std::ldexp(v, 53), std::floor(std::ldexp(v, 53)));
    if (std::ldexp(v, 24) != std::floor(std::ldexp(v, 24))) ++below_float_grid;
  }
  EXPECT_GT(below_float_grid, 990);
}

TEST(NetMaskTest, HandComputedExamples) {
  const PairwiseMasks masks = HandMasks();
  // Oracle: plaintext sums of the definition, then mod 1.
  const double oracle1 = std::fmod(0.2 + 0.5, 1.0);
  const double oracle2 = 0.9 - 0.2;
  const double oracle3 = -0.5 - 0.9 + 2.0;
  EXPECT_NEAR(NetMask(1, masks)[0], oracle1, 1e-15);
  EXPECT_NEAR(NetMask(2, masks)[0], oracle2, 1e-15);
  EXPECT_NEAR(NetMask(3, masks)[0], oracle3, 1e-15);
  EXPECT_NEAR(oracle1, 0.7, 1e-15);
  EXPECT_NEAR(oracle2, 0.7, 1e-15);
  EXPECT_NEAR(oracle3, 0.6, 1e-15);
}

TEST(NetMaskTest, IndexOutOfRange) {
  const PairwiseMasks masks = HandMasks();
  EXPECT_THROW(NetMask(0, masks), DomainError);
  EXPECT_THROW(NetMask(4, masks), DomainError);
}

TEST(NetMaskTest, NetMasksCancel) {
  std::mt19937_64 seeds(123);
  for (int k = 2; k <= 12; ++k) {
    for (std::size_t m : {1u, 17u}) {
      const PairwiseMasks masks =
          GeneratePairwiseMasks(k, m, MaskSeed::FromInteger(seeds()));
      std::vector<TorusVector> nets;
      for (int c = 1; c <= k; ++c) nets.push_back(NetMask(c, masks));
      const TorusVector total = TorusSum(nets);
      for (double v : total.values()) {
        ASSERT_LE(TorusDistance(v, 0.0), k * 0x1.0p-50) << "K=" << k;
      }
    }
  }
}

TEST(NetMaskTest, DyadicMasksCancelExactly) {
  const int k = 6;
  std::map<std::pair<int, int>, TorusVector> map;
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> dist(0, 1023);
  for (int a = 1; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) {
      map.emplace(std::pair{a, b},
                  TorusVector({dist(gen) / 1024.0, dist(gen) / 1024.0}));
    }
  }
  const PairwiseMasks masks = PairwiseMasks::FromMap(k, 2, std::move(map));
  std::vector<TorusVector> nets;
  for (int c = 1; c <= k; ++c) nets.push_back(NetMask(c, masks));
  EXPECT_EQ(TorusSum(nets), TorusVector::Zeros(2));
}

TEST(FromMapTest, RejectsMissingOrMisshapenPairs) {
  EXPECT_THROW(PairwiseMasks::FromMap(3, 1, {{{1, 2}, TorusVector({0.1})}}),
               ConfigError);
  EXPECT_THROW(PairwiseMasks::FromMap(2, 2, {{{1, 2}, TorusVector({0.1})}}),
               ShapeError);
  EXPECT_THROW(PairwiseMasks::FromMap(2, 1, {{{2, 1}, TorusVector({0.1})}}),
               ConfigError);
}

TEST(EncryptUpdateTest, TwoClientTrace) {
  const PairwiseMasks masks =
      PairwiseMasks::FromMap(2, 1, {{{1, 2}, TorusVector({0.9})}});
  const TorusVector p1 = EncryptUpdate(ModelParams({0.2}), 1, masks, 2.0);
  const TorusVector p2 = EncryptUpdate(ModelParams({0.4}), 2, masks, 2.0);
  // Oracles: (0.2/2 + 0.9) mod 1 and (0.4/2 - 0.9) mod 1.
  EXPECT_LE(TorusDistance(p1[0], 0.0), 1e-15);
  EXPECT_NEAR(p2[0], 0.3, 1e-15);
  const TorusVector aggregate = TorusAdd(p1, p2);
  EXPECT_LE(TorusDistance(aggregate[0], std::fmod((0.2 + 0.4) / 2.0, 1.0)),
            1e-15);
}

TEST(EncryptUpdateTest, EqualsScaledPlusNetMask) {
  const PairwiseMasks masks = GeneratePairwiseMasks(5, 64, MaskSeed::FromInteger(5));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int k = 1; k <= 5; ++k) {
    std::vector<double> theta(64);
    for (double& x : theta) x = dist(gen);
    const TorusVector p = EncryptUpdate(ModelParams(theta), k, masks, 50.0);
    const TorusVector q =
        TorusAdd(ScaleToTorus(ModelParams(theta), 50.0), NetMask(k, masks));
    for (std::size_t i = 0; i < p.size(); ++i) {
      ASSERT_LE(TorusDistance(p[i], q[i]), 5 * 0x1.0p-52);
    }
  }
}

TEST(EncryptUpdateTest, ShapeMismatch) {
  const PairwiseMasks masks = GeneratePairwiseMasks(2, 3, MaskSeed::FromInteger(5));
  EXPECT_THROW(EncryptUpdate(ModelParams({1.0}), 1, masks, 2.0), ShapeError);
  EXPECT_THROW(EncryptUpdate(ModelParams({1.0, 2.0, 3.0}), 3, masks, 2.0),
               DomainError);
}

TEST(EncryptUpdateTest, CountsScalingAndMaskOps) {
  const int k = 6;
  const std::size_t m = 11;
  const PairwiseMasks masks = GeneratePairwiseMasks(k, m, MaskSeed::FromInteger(5));
  for (int c = 1; c <= k; ++c) {
    OpTally tally;
    EncryptUpdate(ModelParams(std::vector<double>(m, 0.5)), c, masks, 10.0,
                  Precision::kFloat64, &tally);
    EXPECT_EQ(tally.multiplications, m);
    EXPECT_EQ(tally.additions, m * (k - 1));
  }
}

TEST(EncryptUpdateTest, AggregateRecoversPlaintextSum) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int k : {2, 3, 7, 12}) {
    const std::size_t m = 257;
    const double l = 2.0 * k;  // strict mode with R = 1
    const PairwiseMasks masks = GeneratePairwiseMasks(k, m, MaskSeed::FromInteger(gen()));
    std::vector<TorusVector> submissions;
    std::vector<double> plain(m, 0.0);
    for (int c = 1; c <= k; ++c) {
      std::vector<double> theta(m);
      for (std::size_t i = 0; i < m; ++i) {
        theta[i] = dist(gen);
        plain[i] += theta[i];
      }
      submissions.push_back(EncryptUpdate(ModelParams(theta), c, masks, l));
    }
    const TorusVector aggregate = TorusSum(submissions);
    for (std::size_t i = 0; i < m; ++i) {
      ASSERT_LE(TorusDistance(aggregate[i], Wrap(plain[i] / l)), k * 0x1.0p-50);
    }
  }
}

TEST(EncryptUpdateTest, Float32EmulationStillCancels) {
  const int k = 5;
  const std::size_t m = 100;
  const PairwiseMasks masks = GeneratePairwiseMasks(
      k, m, MaskSeed::FromInteger(3), Precision::kFloat32);
  std::vector<TorusVector> submissions;
  for (int c = 1; c <= k; ++c) {
    const TorusVector p = EncryptUpdate(ModelParams(std::vector<double>(m, 0.25)),
                                        c, masks, 10.0, Precision::kFloat32);
    for (double v : p.values()) {
      ASSERT_EQ(v, static_cast<double>(static_cast<float>(v)));
    }
    submissions.push_back(p);
  }
  const ModelParams sum =
      RecoverReal(TorusSum(submissions, Precision::kFloat32), 10.0);
  for (std::size_t i = 0; i < m; ++i) {
    EXPECT_NEAR(sum[i], 1.25, 1e-4);
  }
}

}  // namespace
}  // namespace torus_secagg
