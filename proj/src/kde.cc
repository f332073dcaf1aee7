// Copyright 2026 The Tabaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tabaudit/kde.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tabaudit {
namespace {

double ScottFromMeanStd(double mean_std, size_t n, size_t dim) {
  const double h =
      mean_std * std::pow(static_cast<double>(n),
                          -1.0 / (static_cast<double>(dim) + 4.0));
  return std::max(h, kMinBandwidth);
}

}  // namespace

double ScottBandwidth(const Matrix& data) {
  const size_t n = data.rows();
  const size_t m = data.cols();
  if (n < 2) {
    throw std::invalid_argument("Scott bandwidth needs at least two rows, got " +
                                std::to_string(n));
  }
  double std_sum = 0.0;
  for (size_t c = 0; c < m; ++c) {
    double mean = 0.0;
    for (size_t r = 0; r < n; ++r) mean += data(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (size_t r = 0; r < n; ++r) {
      const double d = data(r, c) - mean;
      ss += d * d;
    }
    std_sum += std::sqrt(ss / static_cast<double>(n - 1));
  }
  return ScottFromMeanStd(std_sum / static_cast<double>(m), n, m);
}

double ScottBandwidthWithExtra(const Matrix& data,
                               std::span<const double> extra) {
  const size_t n = data.rows() + 1;
  const size_t m = data.cols();
  if (extra.size() != m) {
    throw std::invalid_argument("Scott bandwidth: extra row has wrong width");
  }
  double std_sum = 0.0;
  for (size_t c = 0; c < m; ++c) {
    double mean = extra[c];
    for (size_t r = 0; r < data.rows(); ++r) mean += data(r, c);
    mean /= static_cast<double>(n);
    double ss = (extra[c] - mean) * (extra[c] - mean);
    for (size_t r = 0; r < data.rows(); ++r) {
      const double d = data(r, c) - mean;
      ss += d * d;
    }
    std_sum += std::sqrt(ss / static_cast<double>(n - 1));
  }
  return ScottFromMeanStd(std_sum / static_cast<double>(m), n, m);
}

double GaussianMixtureLogPdf(std::span<const double> squared_distances,
                             double bandwidth, size_t dim) {
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  double max_term = -std::numeric_limits<double>::infinity();
  for (double d2 : squared_distances) max_term = std::max(max_term, -d2 * inv_two_h2);
  double sum = 0.0;
  for (double d2 : squared_distances) sum += std::exp(-d2 * inv_two_h2 - max_term);
  const double n = static_cast<double>(squared_distances.size());
  return max_term + std::log(sum) - std::log(n) -
         0.5 * static_cast<double>(dim) *
             std::log(2.0 * std::numbers::pi * bandwidth * bandwidth);
}

KdeModel KdeModel::Fit(Matrix support) {
  const double h = ScottBandwidth(support);
  return KdeModel(std::move(support), h);
}

KdeModel::KdeModel(Matrix support, double bandwidth)
    : support_(std::move(support)), bandwidth_(bandwidth) {
  if (support_.rows() == 0) throw std::invalid_argument("KDE: empty support");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw std::invalid_argument("KDE: bandwidth must be positive and finite");
  }
}

double KdeModel::LogPdf(std::span<const double> query) const {
  if (query.size() != support_.cols()) {
    throw std::invalid_argument("KDE query has dimension " +
                                std::to_string(query.size()) + ", model has " +
                                std::to_string(support_.cols()));
  }
  std::vector<double> d2(support_.rows());
  for (size_t i = 0; i < support_.rows(); ++i) {
    d2[i] = SquaredDistance(query, support_.Row(i));
  }
  return GaussianMixtureLogPdf(d2, bandwidth_, support_.cols());
}

}  // namespace tabaudit
