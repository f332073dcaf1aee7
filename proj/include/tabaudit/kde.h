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

#ifndef TABAUDIT_KDE_H_
#define TABAUDIT_KDE_H_

#include <span>

#include "tabaudit/core.h"

namespace tabaudit {

inline constexpr double kMinBandwidth = 1e-6;

// Scott's rule with a scalar bandwidth: mean per-dimension sample standard
// deviation (n - 1 denominator) times n^(-1/(m+4)), floored at 1e-6.
// Throws std::invalid_argument for fewer than two rows.
double ScottBandwidth(const Matrix& data);

// Same rule for data plus one extra row, without materializing the union.
double ScottBandwidthWithExtra(const Matrix& data, std::span<const double> extra);

// log((1/n) sum_i exp(-d2_i / (2h^2))) - (m/2) log(2 pi h^2), evaluated with
// log-sum-exp. `squared_distances` holds ||query - x_i||^2 over the support.
double GaussianMixtureLogPdf(std::span<const double> squared_distances,
                             double bandwidth, size_t dim);

// Isotropic Gaussian kernel density estimate.
class KdeModel {
 public:
  // Bandwidth from ScottBandwidth.
  static KdeModel Fit(Matrix support);

  KdeModel(Matrix support, double bandwidth);

  double bandwidth() const { return bandwidth_; }
  const Matrix& support() const { return support_; }

  // Always finite. Throws std::invalid_argument on dimension mismatch.
  double LogPdf(std::span<const double> query) const;

 private:
  Matrix support_;
  double bandwidth_;
};

}  // namespace tabaudit

#endif  // TABAUDIT_KDE_H_
