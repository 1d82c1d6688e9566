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

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "torus_secagg/errors.h"

#ifndef TORUS_SECAGG_DEFAULT_MNIST_DIR
#define TORUS_SECAGG_DEFAULT_MNIST_DIR "data/mnist_subset"
#endif

namespace torus_secagg {
namespace {

constexpr std::uint8_t kUnsignedByteType = 0x08;
constexpr std::uint64_t kBlobDomain = 0x626c6f6273000000ULL;
constexpr std::uint64_t kPartitionDomain = 0x7061727469740000ULL;

std::uint64_t ElementCount(const std::vector<std::uint32_t>& dims) {
  std::uint64_t count = 1;
  for (std::uint32_t d : dims) {
    if (d != 0 && count > (std::uint64_t{1} << 40) / d) {
      throw LengthError("IDX: tensor too large");
    }
    count *= d;
  }
  return count;
}

}  // namespace

IdxTensor ParseIdx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw LengthError("IDX: truncated header");
  if (bytes[0] != 0 || bytes[1] != 0) throw FormatError("IDX: bad magic");
  if (bytes[2] != kUnsignedByteType) {
    throw FormatError("IDX: unsupported type byte " +
                      std::to_string(static_cast<int>(bytes[2])));
  }
  const std::size_t rank = bytes[3];
  const std::size_t header = 4 + 4 * rank;
  if (bytes.size() < header) throw LengthError("IDX: truncated dimensions");

  IdxTensor tensor;
  tensor.dims.reserve(rank);
  for (std::size_t d = 0; d < rank; ++d) {
    const std::size_t o = 4 + 4 * d;
    tensor.dims.push_back((std::uint32_t{bytes[o]} << 24) |
                          (std::uint32_t{bytes[o + 1]} << 16) |
                          (std::uint32_t{bytes[o + 2]} << 8) |
                          std::uint32_t{bytes[o + 3]});
  }
  const std::uint64_t count = ElementCount(tensor.dims);
  if (bytes.size() - header < count) throw LengthError("IDX: truncated payload");
  if (bytes.size() - header > count) {
    throw LengthError("IDX: trailing bytes after payload");
  }
  tensor.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                     bytes.end());
  return tensor;
}

std::vector<std::uint8_t> SerializeIdx(const IdxTensor& tensor) {
  if (tensor.dims.size() > 255) throw ShapeError("IDX: too many dimensions");
  if (ElementCount(tensor.dims) != tensor.data.size()) {
    throw ShapeError("IDX: payload size does not match dimensions");
  }
  std::vector<std::uint8_t> out = {0, 0, kUnsignedByteType,
                                   static_cast<std::uint8_t>(tensor.dims.size())};
  for (std::uint32_t d : tensor.dims) {
    out.push_back(static_cast<std::uint8_t>(d >> 24));
    out.push_back(static_cast<std::uint8_t>(d >> 16));
    out.push_back(static_cast<std::uint8_t>(d >> 8));
    out.push_back(static_cast<std::uint8_t>(d));
  }
  out.insert(out.end(), tensor.data.begin(), tensor.data.end());
  return out;
}

IdxTensor ReadIdxFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return ParseIdx(bytes);
}

void WriteIdxFile(const std::filesystem::path& path, const IdxTensor& tensor) {
  const std::vector<std::uint8_t> bytes = SerializeIdx(tensor);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Dataset::Dataset(std::vector<double> features, std::vector<int> labels,
                 std::size_t num_features, int num_classes)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      num_features_(num_features),
      num_classes_(num_classes) {
  if (num_classes < 2) throw ConfigError("Dataset: need at least 2 classes");
  if (num_features == 0 || features_.size() != labels_.size() * num_features) {
    throw ShapeError("Dataset: feature matrix does not match label count");
  }
  for (double v : features_) {
    if (!std::isfinite(v)) throw DomainError("Dataset: non-finite feature");
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes) throw DomainError("Dataset: label out of range");
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  std::vector<double> features;
  features.reserve(indices.size() * num_features_);
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw DomainError("Dataset::Subset: index out of range");
    const auto r = row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  Dataset out;
  out.features_ = std::move(features);
  out.labels_ = std::move(labels);
  out.num_features_ = num_features_;
  out.num_classes_ = num_classes_;
  return out;
}

Dataset Dataset::Head(std::size_t n) const {
  std::vector<std::size_t> idx(std::min(n, size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return Subset(idx);
}

Dataset DatasetFromIdx(const IdxTensor& images, const IdxTensor& labels,
                       int num_classes) {
  if (images.dims.size() != 3 || labels.dims.size() != 1 ||
      images.dims[0] != labels.dims[0]) {
    throw ShapeError("DatasetFromIdx: expected n x rows x cols images and n labels");
  }
  const std::size_t n = images.dims[0];
  const std::size_t f = std::size_t{images.dims[1]} * images.dims[2];
  std::vector<double> features(images.data.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    features[i] = static_cast<double>(images.data[i]) / 255.0;
  }
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels.data[i];
  return Dataset(std::move(features), std::move(y), f, num_classes);
}

MnistSplits LoadMnist(const std::filesystem::path& dir, std::size_t max_train,
                      std::size_t max_test) {
  const auto load = [&dir](const char* images, const char* labels,
                           std::size_t limit) {
    for (const char* name : {images, labels}) {
      if (!std::filesystem::exists(dir / name)) {
        throw DataError("MNIST file missing: " + (dir / name).string());
      }
    }
    Dataset ds = DatasetFromIdx(ReadIdxFile(dir / images),
                                ReadIdxFile(dir / labels));
    return limit == 0 ? ds : ds.Head(limit);
  };
  MnistSplits splits;
  splits.train = load("train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                      max_train);
  splits.test = load("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte",
                     max_test);
  return splits;
}

std::filesystem::path DefaultMnistDir() {
  if (const char* env = std::getenv("TORUS_SECAGG_MNIST_DIR");
      env != nullptr && *env != '\0') {
    return env;
  }
  return TORUS_SECAGG_DEFAULT_MNIST_DIR;
}

Dataset SynthBlobs(int num_classes, std::size_t num_samples,
                   std::size_t num_features, double separation,
                   std::uint64_t seed) {
  if (num_classes < 2) throw ConfigError("SynthBlobs: C must be >= 2");
  if (num_samples < static_cast<std::size_t>(num_classes)) {
    throw ConfigError("SynthBlobs: n must be >= C");
  }
  if (num_features < 1) throw ConfigError("SynthBlobs: f must be >= 1");

  Generator gen = DeriveStream(Seed256::FromInteger(seed), {kBlobDomain});
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> centres(static_cast<std::size_t>(num_classes) *
                              num_features);
  for (int c = 0; c < num_classes; ++c) {
    double* u = centres.data() + static_cast<std::size_t>(c) * num_features;
    double norm = 0.0;
    while (norm == 0.0) {
      norm = 0.0;
      for (std::size_t j = 0; j < num_features; ++j) {
        u[j] = normal(gen);
        norm += u[j] * u[j];
      }
      norm = std::sqrt(norm);
    }
    for (std::size_t j = 0; j < num_features; ++j) u[j] *= separation / norm;
  }

  std::vector<double> features(num_samples * num_features);
  std::vector<int> labels(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(num_classes));
    labels[i] = c;
    const double* mu = centres.data() + static_cast<std::size_t>(c) * num_features;
    for (std::size_t j = 0; j < num_features; ++j) {
      features[i * num_features + j] = mu[j] + normal(gen);
    }
  }
  return Dataset(std::move(features), std::move(labels), num_features,
                 num_classes);
}

Partition PartitionIid(std::size_t num_samples, int num_shards,
                       std::uint64_t seed) {
  if (num_shards < 1) throw ConfigError("PartitionIid: K must be >= 1");
  const auto k = static_cast<std::size_t>(num_shards);
  if (k > num_samples) throw ConfigError("PartitionIid: K exceeds sample count");

  Generator gen = DeriveStream(Seed256::FromInteger(seed), {kPartitionDomain});
  const std::vector<std::size_t> perm = RandomPermutation(num_samples, gen);
  Partition partition;
  partition.shards.resize(k);
  const std::size_t base = num_samples / k;
  const std::size_t extra = num_samples % k;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t len = base + (s < extra ? 1 : 0);
    partition.shards[s].assign(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                               perm.begin() + static_cast<std::ptrdiff_t>(offset + len));
    offset += len;
  }
  return partition;
}

}  // namespace torus_secagg
