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

#ifndef TORUS_SECAGG_DATA_H_
#define TORUS_SECAGG_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "torus_secagg/rng.h"

namespace torus_secagg {

// Decoded IDX tensor with unsigned-byte payload.
struct IdxTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;

  friend bool operator==(const IdxTensor&, const IdxTensor&) = default;
};

// Parses an IDX buffer: two zero bytes, type byte 0x08, dimension count,
// big-endian 32-bit sizes, payload. Throws FormatError on a bad magic or
// type byte and LengthError when the payload length disagrees with the
// header.
IdxTensor ParseIdx(std::span<const std::uint8_t> bytes);

// Inverse of ParseIdx. Throws ShapeError if data.size() != product(dims).
std::vector<std::uint8_t> SerializeIdx(const IdxTensor& tensor);

// Throws DataError if the file cannot be read.
IdxTensor ReadIdxFile(const std::filesystem::path& path);
void WriteIdxFile(const std::filesystem::path& path, const IdxTensor& tensor);

// n x f feature matrix (row-major) with integer labels in [0, C).
class Dataset {
 public:
  Dataset() = default;
  // Throws ShapeError when sizes disagree, DomainError for non-finite
  // features or labels outside [0, C), ConfigError for C < 2.
  Dataset(std::vector<double> features, std::vector<int> labels,
          std::size_t num_features, int num_classes);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t num_features() const { return num_features_; }
  int num_classes() const { return num_classes_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * num_features_, num_features_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }

  // Rows at `indices`, in that order.
  Dataset Subset(std::span<const std::size_t> indices) const;
  // First min(n, size()) rows.
  Dataset Head(std::size_t n) const;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  std::size_t num_features_ = 0;
  int num_classes_ = 0;
};

// Images (n x rows x cols) with bytes scaled by 1/255, so 0 -> 0.0 and
// 255 -> 1.0 exactly. Throws ShapeError if the tensors disagree.
Dataset DatasetFromIdx(const IdxTensor& images, const IdxTensor& labels,
                       int num_classes = 10);

struct MnistSplits {
  Dataset train;
  Dataset test;
};

// Reads train-images-idx3-ubyte, train-labels-idx1-ubyte,
// t10k-images-idx3-ubyte and t10k-labels-idx1-ubyte from `dir`. A limit of 0
// keeps every sample. Throws DataError when a file is missing.
MnistSplits LoadMnist(const std::filesystem::path& dir,
                      std::size_t max_train = 0, std::size_t max_test = 0);

// $TORUS_SECAGG_MNIST_DIR when set, otherwise the bundled subset.
std::filesystem::path DefaultMnistDir();

// Gaussian blobs: class c is centred on separation * u_c for a random unit
// vector u_c, unit covariance. Labels cycle 0..C-1 so counts differ by at most
// one. Throws ConfigError unless C >= 2, n >= C and f >= 1.
Dataset SynthBlobs(int num_classes, std::size_t num_samples,
                   std::size_t num_features, double separation,
                   std::uint64_t seed);

// K disjoint shards covering 0..n-1.
struct Partition {
  std::vector<std::vector<std::size_t>> shards;
};

// Random permutation split into K shards whose sizes differ by at most one.
// Throws ConfigError for K < 1 or K > n.
Partition PartitionIid(std::size_t num_samples, int num_shards,
                       std::uint64_t seed);

}  // namespace torus_secagg

#endif  // TORUS_SECAGG_DATA_H_
