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

#include "torus_secagg/data.h"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "torus_secagg/errors.h"

namespace torus_secagg {
namespace {

// Nearest class mean: means from the first half, accuracy on the second.
double NearestCentroidAccuracy(const Dataset& d) {
  const std::size_t half = d.size() / 2;
  const std::size_t f = d.num_features();
  const int c = d.num_classes();
  std::vector<double> means(static_cast<std::size_t>(c) * f, 0.0);
  std::vector<double> counts(c, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    counts[d.label(i)] += 1;
    for (std::size_t j = 0; j < f; ++j) means[d.label(i) * f + j] += d.row(i)[j];
  }
  for (int k = 0; k < c; ++k) {
    for (std::size_t j = 0; j < f; ++j) means[k * f + j] /= counts[k];
  }
  std::size_t correct = 0;
  for (std::size_t i = half; i < d.size(); ++i) {
    int best = 0;
    double best_dist = 1e300;
    for (int k = 0; k < c; ++k) {
      double dist = 0;
      for (std::size_t j = 0; j < f; ++j) {
        const double diff = d.row(i)[j] - means[k * f + j];
        dist += diff * diff;
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    correct += (best == d.label(i));
  }
  return static_cast<double>(correct) / (d.size() - half);
}

TEST(ParseIdxTest, LabelVector) {
  const std::vector<std::uint8_t> bytes{0, 0, 8, 1, 0, 0, 0, 3, 7, 2, 9};
  const IdxTensor t = ParseIdx(bytes);
  EXPECT_EQ(t.dims, std::vector<std::uint32_t>{3});
  EXPECT_EQ(t.data, (std::vector<std::uint8_t>{7, 2, 9}));
}

TEST(ParseIdxTest, ImageTensor) {
  const std::vector<std::uint8_t> bytes{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2,
                                        0, 0, 0, 2, 1, 2, 3, 4, 5, 6, 7, 8};
  const IdxTensor t = ParseIdx(bytes);
  EXPECT_EQ(t.dims, (std::vector<std::uint32_t>{2, 2, 2}));
  EXPECT_EQ(t.data.size(), 8u);
  EXPECT_EQ(t.data.back(), 8);
}

TEST(ParseIdxTest, Errors) {
  EXPECT_THROW(ParseIdx(std::vector<std::uint8_t>{0, 0, 7, 1, 0, 0, 0, 1, 5}),
               FormatError);
  EXPECT_THROW(ParseIdx(std::vector<std::uint8_t>{1, 0, 8, 1, 0, 0, 0, 1, 5}),
               FormatError);
  EXPECT_THROW(ParseIdx(std::vector<std::uint8_t>{0, 0, 8, 1, 0, 0, 0, 3, 7}),
               LengthError);
  EXPECT_THROW(ParseIdx(std::vector<std::uint8_t>{0, 0, 8, 1, 0, 0, 0, 1, 7, 7}),
               LengthError);
  EXPECT_THROW(ParseIdx(std::vector<std::uint8_t>{0, 0, 8}), LengthError);
  EXPECT_THROW(ParseIdx(std::vector<std::uint8_t>{0, 0, 8, 2, 0, 0}), LengthError);
}

TEST(ParseIdxTest, SerializeRoundTrip) {
  IdxTensor t{{3, 4, 5}, std::vector<std::uint8_t>(60)};
  std::iota(t.data.begin(), t.data.end(), 0);
  EXPECT_EQ(ParseIdx(SerializeIdx(t)), t);
  EXPECT_THROW(SerializeIdx(IdxTensor{{2}, {1}}), ShapeError);

  const auto path = std::filesystem::temp_directory_path() / "torus_secagg_idx_rt";
  WriteIdxFile(path, t);
  EXPECT_EQ(ReadIdxFile(path), t);
  std::filesystem::remove(path);
  EXPECT_THROW(ReadIdxFile(path), DataError);
}

TEST(DatasetFromIdxTest, ScalesPixelsToUnitInterval) {
  const IdxTensor images{{2, 1, 2}, {0, 255, 51, 102}};
  const IdxTensor labels{{2}, {3, 9}};
  const Dataset d = DatasetFromIdx(images, labels);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.num_features(), 2u);
  EXPECT_EQ(d.row(0)[0], 0.0);
  EXPECT_EQ(d.row(0)[1], 1.0);
  EXPECT_DOUBLE_EQ(d.row(1)[0], 0.2);
  EXPECT_EQ(d.label(1), 9);
  EXPECT_THROW(DatasetFromIdx(images, IdxTensor{{1}, {3}}), ShapeError);
  EXPECT_THROW(DatasetFromIdx(images, IdxTensor{{2}, {3, 10}}), DomainError);
}

TEST(DatasetTest, Validation) {
  EXPECT_THROW(Dataset({1.0}, {0}, 1, 1), ConfigError);
  EXPECT_THROW(Dataset({1.0, 2.0}, {0}, 1, 2), ShapeError);
  EXPECT_THROW(Dataset({1.0}, {2}, 1, 2), DomainError);
  EXPECT_THROW(Dataset({std::nan("")}, {0}, 1, 2), DomainError);
  const Dataset d({1.0, 2.0, 3.0}, {0, 1, 0}, 1, 2);
  const std::vector<std::size_t> idx{2, 0};
  const Dataset s = d.Subset(idx);
  EXPECT_EQ(s.row(0)[0], 3.0);
  EXPECT_EQ(s.row(1)[0], 1.0);
  EXPECT_EQ(d.Head(10).size(), 3u);
  EXPECT_EQ(d.Head(1).size(), 1u);
}

TEST(LoadMnistTest, Fixture) {
  const MnistSplits s = LoadMnist(TORUS_SECAGG_TEST_MNIST_DIR, 1000, 1000);
  EXPECT_EQ(s.train.size(), 1000u);
  EXPECT_EQ(s.test.size(), 1000u);
  EXPECT_EQ(s.train.num_features(), 784u);
  EXPECT_EQ(s.train.num_classes(), 10);
  std::set<int> seen(s.train.labels().begin(), s.train.labels().end());
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_EQ(LoadMnist(TORUS_SECAGG_TEST_MNIST_DIR, 50, 20).train.size(), 50u);
}

TEST(LoadMnistTest, MissingDirectoryIsDataError) {
  EXPECT_THROW(LoadMnist("/nonexistent/mnist"), DataError);
}

TEST(SynthBlobsTest, BalancedAndDeterministic) {
  const Dataset d = SynthBlobs(4, 103, 6, 1.0, 2);
  EXPECT_EQ(d.size(), 103u);
  std::vector<int> counts(4, 0);
  for (int y : d.labels()) ++counts[y];
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  EXPECT_LE(*hi - *lo, 1);
  const Dataset again = SynthBlobs(4, 103, 6, 1.0, 2);
  EXPECT_TRUE(std::equal(d.labels().begin(), d.labels().end(),
                         again.labels().begin()));
  EXPECT_EQ(d.row(50)[3], again.row(50)[3]);
}

TEST(SynthBlobsTest, OneSamplePerClass) {
  const Dataset d = SynthBlobs(5, 5, 3, 1.0, 1);
  std::set<int> seen(d.labels().begin(), d.labels().end());
  EXPECT_EQ(seen.size(), 5u);
  EXPECT_THROW(SynthBlobs(5, 4, 3, 1.0, 1), ConfigError);
  EXPECT_THROW(SynthBlobs(1, 4, 3, 1.0, 1), ConfigError);
  EXPECT_THROW(SynthBlobs(2, 4, 0, 1.0, 1), ConfigError);
}

TEST(SynthBlobsTest, SeparationControlsDifficulty) {
  const Dataset none = SynthBlobs(5, 5000, 10, 0.0, 4);
  EXPECT_NEAR(NearestCentroidAccuracy(none), 0.2, 0.04);
  const Dataset far = SynthBlobs(5, 5000, 10, 10.0, 4);
  EXPECT_GT(NearestCentroidAccuracy(far), 0.99);
}

TEST(PartitionIidTest, Examples) {
  const Partition p = PartitionIid(10, 3, 1);
  ASSERT_EQ(p.shards.size(), 3u);
  EXPECT_EQ(p.shards[0].size(), 4u);
  EXPECT_EQ(p.shards[1].size(), 3u);
  EXPECT_EQ(p.shards[2].size(), 3u);
  EXPECT_EQ(PartitionIid(5, 5, 1).shards[4].size(), 1u);
  EXPECT_THROW(PartitionIid(3, 4, 1), ConfigError);
  EXPECT_THROW(PartitionIid(3, 0, 1), ConfigError);
}

TEST(PartitionIidTest, DisjointCoverWithBalancedSizes) {
  for (std::size_t n : {1u, 17u, 1000u}) {
    for (int k : {1, 3, 7}) {
      if (static_cast<std::size_t>(k) > n) continue;
      const Partition p = PartitionIid(n, k, n + k);
      std::vector<std::size_t> all;
      std::size_t lo = n, hi = 0;
      for (const auto& s : p.shards) {
        all.insert(all.end(), s.begin(), s.end());
        lo = std::min(lo, s.size());
        hi = std::max(hi, s.size());
      }
      std::sort(all.begin(), all.end());
      std::vector<std::size_t> expected(n);
      std::iota(expected.begin(), expected.end(), 0);
      EXPECT_EQ(all, expected);
      EXPECT_LE(hi - lo, 1u);
    }
  }
  EXPECT_EQ(PartitionIid(100, 4, 9).shards, PartitionIid(100, 4, 9).shards);
  EXPECT_NE(PartitionIid(100, 4, 9).shards, PartitionIid(100, 4, 10).shards);
}

}  // namespace
}  // namespace torus_secagg
