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

#include "torus_secagg/errors.h"

namespace torus_secagg {

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("CosineSimilarity: length mismatch");
  }
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) {
    throw MetricError("CosineSimilarity: zero vector");
  }
  const double cosine = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
  return std::clamp(cosine, -1.0, 1.0);
}

double CosineSimilarity(const ModelParams& a, const ModelParams& b) {
  return CosineSimilarity(a.values(), b.values());
}

double KsUniformStatistic(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw DomainError("KsUniformStatistic: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double x : sorted) {
    if (!(x >= 0.0 && x < 1.0)) {
      throw DomainError("KsUniformStatistic: sample outside [0,1)");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double nd = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double above = static_cast<double>(i + 1) / nd - sorted[i];
    const double below = sorted[i] - static_cast<double>(i) / nd;
    d = std::max({d, above, below});
  }
  return d;
}

double KsCriticalValue(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

bool PassesKsUniformity(std::span<const double> samples) {
  return KsUniformStatistic(samples) < KsCriticalValue(samples.size());
}

double PearsonCorrelation(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("PearsonCorrelation: length mismatch");
  }
  const std::size_t n = x.size();
  if (n < 3) throw ShapeError("PearsonCorrelation: need n >= 3");
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw MetricError("PearsonCorrelation: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double ChiSquareUniformStatistic(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw DomainError("ChiSquare: need >= 2 bins");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total == 0.0) throw DomainError("ChiSquare: no observations");
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

MetricReport Summarize(std::span<const double> runs) {
  if (runs.empty()) throw DomainError("Summarize: no runs");
  MetricReport report;
  report.count = runs.size();
  report.values.assign(runs.begin(), runs.end());
  double sum = 0.0;
  for (double v : runs) sum += v;
  report.mean = sum / static_cast<double>(runs.size());
  double sq = 0.0;
  for (double v : runs) sq += (v - report.mean) * (v - report.mean);
  report.stddev = std::sqrt(sq / static_cast<double>(runs.size()));
  return report;
}

}  // namespace torus_secagg
