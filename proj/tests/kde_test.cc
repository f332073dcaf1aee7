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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.h"

namespace tabaudit {
namespace {

TEST(ScottTest, IdenticalPointsHitFloor) {
  EXPECT_EQ(ScottBandwidth(testutil::M({{1, 2}, {1, 2}, {1, 2}})), kMinBandwidth);
}

TEST(ScottTest, UnitStdSixteenPoints) {
  // 16 points with sample std exactly 1: eight at -a, eight at +a.
  const double a = std::sqrt(15.0 / 16.0);
  Matrix x;
  for (int i = 0; i < 16; ++i) x.AppendRow(std::vector<double>{i < 8 ? -a : a});
  EXPECT_NEAR(ScottBandwidth(x), std::pow(16.0, -0.2), 1e-12);
  EXPECT_NEAR(ScottBandwidth(x), 0.5743, 1e-4);
}

TEST(ScottTest, AveragesDimensions) {
  const Matrix x = testutil::M({{0, 0}, {2, 4}});
  // Per-dim sample std: sqrt(2), sqrt(8); mean times 2^(-1/6).
  const double want = 0.5 * (std::sqrt(2.0) + std::sqrt(8.0)) * std::pow(2.0, -1.0 / 6.0);
  EXPECT_NEAR(ScottBandwidth(x), want, 1e-12);
  EXPECT_THROW(ScottBandwidth(testutil::M({{1, 1}})), std::invalid_argument);
}

TEST(ScottTest, WithExtraMatchesStacked) {
  const Matrix x = testutil::M({{0, 1}, {2, 5}, {3, -1}});
  const std::vector<double> extra = {7, 7};
  Matrix y = x;
  y.AppendRow(extra);
  EXPECT_NEAR(ScottBandwidthWithExtra(x, extra), ScottBandwidth(y), 1e-12);
}

TEST(KdeTest, SinglePointClosedForm) {
  const KdeModel kde(testutil::Column({0}), 1.0);
  EXPECT_NEAR(kde.LogPdf(std::vector<double>{0}), -0.5 * std::log(2 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(kde.LogPdf(std::vector<double>{2}),
              -0.5 * std::log(2 * std::numbers::pi) - 2.0, 1e-12);
}

TEST(KdeTest, FarQueryIsFinite) {
  const KdeModel kde(testutil::Column({0, 1}), 0.1);
  const double v = kde.LogPdf(std::vector<double>{1e4});
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(v, -1e6);
}

TEST(KdeTest, TwoDimMatchesDirectSum) {
  const Matrix s = testutil::M({{0, 0}, {1, 0}, {0, 2}});
  const double h = 0.7;
  const KdeModel kde(s, h);
  const std::vector<double> q = {0.3, 0.4};
  double direct = 0;
  for (size_t i = 0; i < s.rows(); ++i) {
    const double d2 = SquaredDistance(s.Row(i), q);
    direct += std::exp(-d2 / (2 * h * h)) / (2 * std::numbers::pi * h * h);
  }
  EXPECT_NEAR(kde.LogPdf(q), std::log(direct / 3), 1e-12);
  EXPECT_THROW(kde.LogPdf(std::vector<double>{1}), std::invalid_argument);
}

TEST(KdeTest, OneDimIntegratesToOne) {
  Rng rng(RandomSeed{5});
  Matrix x;
  for (int i = 0; i < 25; ++i) x.AppendRow(std::vector<double>{rng.Normal() * 3});
  const KdeModel kde = KdeModel::Fit(x);
  const double h = kde.bandwidth();
  double mass = 0;
  const double step = h / 50;
  for (double t = -40; t < 40; t += step) {
    mass += std::exp(kde.LogPdf(std::vector<double>{t + step / 2})) * step;
  }
  EXPECT_NEAR(mass, 1.0, 1e-3);
}

}  // namespace
}  // namespace tabaudit
