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

#include "torus_secagg/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "torus_secagg/errors.h"

namespace torus_secagg {

// --- ModelParams ------------------------------------------------------------

std::size_t LayoutSize(const std::vector<TensorShape>& layout) {
  std::size_t total = 0;
  for (const auto& shape : layout) {
    total += std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                             std::multiplies<>());
  }
  return total;
}

ModelParams::ModelParams(std::vector<double> flat)
    : ModelParams(std::move(flat), {}) {}

ModelParams::ModelParams(std::vector<double> flat,
                         std::vector<TensorShape> layout)
    : flat_(std::move(flat)), layout_(std::move(layout)) {
  if (layout_.empty()) layout_ = {TensorShape{flat_.size()}};
  if (LayoutSize(layout_) != flat_.size()) {
    throw ShapeError("ModelParams: layout describes " +
                     std::to_string(LayoutSize(layout_)) +
                     " parameters, got " + std::to_string(flat_.size()));
  }
  if (!AllFinite()) throw DomainError("ModelParams: non-finite entry");
}

ModelParams ModelParams::Zeros(std::vector<TensorShape> layout) {
  const std::size_t m = LayoutSize(layout);
  return ModelParams(std::vector<double>(m, 0.0), std::move(layout));
}

double ModelParams::InfinityNorm() const {
  double norm = 0.0;
  for (double v : flat_) norm = std::max(norm, std::fabs(v));
  return norm;
}

bool ModelParams::AllFinite() const {
  return std::all_of(flat_.begin(), flat_.end(),
                     [](double v) { return std::isfinite(v); });
}

ModelParams ModelParams::WithValues(std::vector<double> flat) const {
  return ModelParams(std::move(flat), layout_);
}

// --- Models -----------------------------------------------------------------

namespace {

struct MlpView {
  const double* w1;  // h x f
  const double* b1;  // h
  const double* w2;  // C x h
  const double* b2;  // C
};

MlpView ViewMlp(const ModelSpec& spec, std::span<const double> p) {
  const std::size_t f = spec.num_features;
  const std::size_t h = spec.hidden;
  const auto c = static_cast<std::size_t>(spec.num_classes);
  MlpView v;
  v.w1 = p.data();
  v.b1 = v.w1 + h * f;
  v.w2 = v.b1 + h;
  v.b2 = v.w2 + c * h;
  return v;
}

void AffineInto(const double* w, const double* b, std::size_t rows,
                std::size_t cols, std::span<const double> x, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = b[r];
    for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * x[j];
    out[r] = acc;
  }
}

// Softmax in place; returns log-sum-exp.
double SoftmaxInPlace(std::span<double> z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return mx + std::log(sum);
}

}  // namespace

std::vector<TensorShape> ModelSpec::Layout() const {
  const auto c = static_cast<std::size_t>(num_classes);
  switch (kind) {
    case ModelKind::kSoftmaxRegression:
      return {{c, num_features}, {c}};
    case ModelKind::kMlp:
      return {{hidden, num_features}, {hidden}, {c, hidden}, {c}};
  }
  return {};
}

std::size_t ModelSpec::ParameterCount() const { return LayoutSize(Layout()); }

void ModelSpec::CheckParams(const ModelParams& params) const {
  if (params.layout() != Layout()) {
    throw ShapeError("model parameters do not match the model layout");
  }
}

void ModelSpec::CheckData(const Dataset& data) const {
  if (data.num_features() != num_features || data.num_classes() != num_classes) {
    throw ShapeError("dataset shape does not match the model");
  }
}

ModelParams InitialParams(const ModelSpec& spec, std::uint64_t seed) {
  if (spec.num_features == 0 || spec.num_classes < 2) {
    throw ConfigError("InitialParams: invalid model spec");
  }
  if (spec.kind == ModelKind::kMlp && spec.hidden == 0) {
    throw ConfigError("InitialParams: MLP needs a hidden width");
  }
  ModelParams params = ModelParams::Zeros(spec.Layout());
  if (spec.kind == ModelKind::kSoftmaxRegression) return params;

  Generator gen = DeriveStream(Seed256::FromInteger(seed), {0x696e6974});
  const std::size_t f = spec.num_features;
  const std::size_t h = spec.hidden;
  const auto c = static_cast<std::size_t>(spec.num_classes);
  auto glorot = [&gen](std::span<double> w, std::size_t fan_in,
                       std::size_t fan_out) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : w) v = (2.0 * UniformUnit(gen) - 1.0) * limit;
  };
  auto values = params.mutable_values();
  glorot(values.subspan(0, h * f), f, h);
  glorot(values.subspan(h * f + h, c * h), h, c);
  return params;
}

void Logits(const ModelSpec& spec, const ModelParams& params,
            std::span<const double> x, std::span<double> out) {
  const std::size_t f = spec.num_features;
  const auto c = static_cast<std::size_t>(spec.num_classes);
  if (x.size() != f || out.size() != c) throw ShapeError("Logits: bad sizes");
  const auto p = params.values();
  if (spec.kind == ModelKind::kSoftmaxRegression) {
    AffineInto(p.data(), p.data() + c * f, c, f, x, out.data());
    return;
  }
  const MlpView v = ViewMlp(spec, p);
  std::vector<double> hidden(spec.hidden);
  AffineInto(v.w1, v.b1, spec.hidden, f, x, hidden.data());
  for (double& a : hidden) a = std::max(a, 0.0);
  AffineInto(v.w2, v.b2, c, spec.hidden, hidden, out.data());
}

int Predict(const ModelSpec& spec, const ModelParams& params,
            std::span<const double> x) {
  std::vector<double> z(static_cast<std::size_t>(spec.num_classes));
  Logits(spec, params, x, z);
  int best = 0;
  for (int c = 1; c < spec.num_classes; ++c) {
    if (z[static_cast<std::size_t>(c)] > z[static_cast<std::size_t>(best)]) {
      best = c;
    }
  }
  return best;
}

double CrossEntropy(const ModelSpec& spec, const ModelParams& params,
                    const Dataset& data, std::span<const std::size_t> batch,
                    std::vector<double>* gradient) {
  spec.CheckParams(params);
  spec.CheckData(data);
  if (batch.empty()) throw DataError("CrossEntropy: empty batch");
  const std::size_t f = spec.num_features;
  const std::size_t h = spec.hidden;
  const auto c = static_cast<std::size_t>(spec.num_classes);
  const auto p = params.values();
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  if (gradient != nullptr) gradient->assign(params.size(), 0.0);
  std::vector<double> z(c);
  std::vector<double> hidden(h);
  std::vector<double> dhidden(h);
  double loss = 0.0;

  for (std::size_t idx : batch) {
    const auto x = data.row(idx);
    const auto y = static_cast<std::size_t>(data.label(idx));

    if (spec.kind == ModelKind::kSoftmaxRegression) {
      AffineInto(p.data(), p.data() + c * f, c, f, x, z.data());
    } else {
      const MlpView v = ViewMlp(spec, p);
      AffineInto(v.w1, v.b1, h, f, x, hidden.data());
      for (double& a : hidden) a = std::max(a, 0.0);
      AffineInto(v.w2, v.b2, c, h, hidden, z.data());
    }
    const double logit_y = z[y];
    loss += SoftmaxInPlace(z) - logit_y;  // -log p_y
    if (gradient == nullptr) continue;

    z[y] -= 1.0;  // dL/dlogits
    double* g = gradient->data();
    if (spec.kind == ModelKind::kSoftmaxRegression) {
      for (std::size_t r = 0; r < c; ++r) {
        const double d = z[r] * inv_n;
        double* gr = g + r * f;
        for (std::size_t j = 0; j < f; ++j) gr[j] += d * x[j];
        g[c * f + r] += d;
      }
      continue;
    }
    const MlpView v = ViewMlp(spec, p);
    double* gw1 = g;
    double* gb1 = gw1 + h * f;
    double* gw2 = gb1 + h;
    double* gb2 = gw2 + c * h;
    std::fill(dhidden.begin(), dhidden.end(), 0.0);
    for (std::size_t r = 0; r < c; ++r) {
      const double d = z[r] * inv_n;
      for (std::size_t j = 0; j < h; ++j) {
        gw2[r * h + j] += d * hidden[j];
        dhidden[j] += d * v.w2[r * h + j];
      }
      gb2[r] += d;
    }
    for (std::size_t j = 0; j < h; ++j) {
      if (hidden[j] <= 0.0) continue;
      const double d = dhidden[j];
      double* row = gw1 + j * f;
      for (std::size_t i = 0; i < f; ++i) row[i] += d * x[i];
      gb1[j] += d;
    }
  }
  return loss * inv_n;
}

double CrossEntropy(const ModelSpec& spec, const ModelParams& params,
                    const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return CrossEntropy(spec, params, data, all);
}

}  // namespace torus_secagg
