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

#include "tabaudit/harness.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "tabaudit/neighbors.h"
#include "tabaudit/preprocess.h"

namespace tabaudit {
namespace {

std::set<uint64_t> Hashes(const DataTable& t) {
  std::set<uint64_t> out;
  for (size_t i = 0; i < t.rows(); ++i) out.insert(t.RowHash(i));
  return out;
}

TEST(GeneratorTest, MemorizerCopiesCoverTrain) {
  const DataTable train = SamplePopulation(30, 3, RandomSeed{1});
  const DataTable s = Generate({GeneratorKind::kMemorizer, 0.0, RandomSeed{2}}, train, 30);
  EXPECT_EQ(Hashes(s), Hashes(train));
}

TEST(GeneratorTest, MarginalValuesFromTrain) {
  const DataTable train = SamplePopulation(25, 2, RandomSeed{3});
  const DataTable s =
      Generate({GeneratorKind::kMarginalResampler, 0.0, RandomSeed{4}}, train, 60);
  for (size_t c = 0; c < 2; ++c) {
    const auto& src = train.column(c).numbers;
    const std::set<double> allowed(src.begin(), src.end());
    for (double v : s.column(c).numbers) EXPECT_TRUE(allowed.count(v));
  }
}

TEST(GeneratorTest, GaussianMeanWithinClt) {
  std::vector<ColumnSpec> specs = {{"a", ColumnKind::kNumeric, std::nullopt},
                                   {"b", ColumnKind::kNumeric, std::nullopt}};
  Rng rng(RandomSeed{5});
  std::vector<DataTable::Column> cols(2);
  for (int i = 0; i < 2000; ++i) {
    cols[0].numbers.push_back(rng.Normal());
    cols[1].numbers.push_back(rng.Normal());
  }
  const DataTable train(TableSchema(specs), std::move(cols));
  const size_t m = 4000;
  const DataTable s = Generate({GeneratorKind::kGaussianFitter, 0.0, RandomSeed{6}}, train, m);
  for (size_t c = 0; c < 2; ++c) {
    double mean = 0;
    for (double v : s.column(c).numbers) mean += v / m;
    EXPECT_LT(std::abs(mean), 3.0 / std::sqrt(static_cast<double>(m)) + 0.08);
  }
}

TEST(FixtureTest, Sizes) {
  const FixtureCase c = MakeCase("leaky", 200, 10, RandomSeed{1});
  EXPECT_EQ(c.train.rows(), 200u);
  EXPECT_EQ(c.holdout.rows(), 100u);
  EXPECT_EQ(c.reference.rows(), 100u);
  EXPECT_EQ(c.synthetic.rows(), 200u);
  EXPECT_EQ(c.synthetic.cols(), 10u);
}

TEST(FixtureTest, LeakyIsSubsetPrivateDisjoint) {
  const FixtureCase leaky = MakeCase("leaky", 50, 4, RandomSeed{2});
  const auto train = Hashes(leaky.train);
  for (uint64_t h : Hashes(leaky.synthetic)) EXPECT_TRUE(train.count(h));
  const FixtureCase priv = MakeCase("private", 50, 4, RandomSeed{2});
  const auto ptrain = Hashes(priv.train);
  for (uint64_t h : Hashes(priv.synthetic)) EXPECT_FALSE(ptrain.count(h));
}

TEST(FixtureTest, SameSeedSameFiles) {
  const FixtureCase a = MakeCase("noisy-0.2", 40, 3, RandomSeed{9});
  const FixtureCase b = MakeCase("noisy-0.2", 40, 3, RandomSeed{9});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.synthetic, b.synthetic);
  EXPECT_THROW(MakeCase("bogus", 40, 3, RandomSeed{9}), ValidationError);
  EXPECT_THROW(MakeCase("noisy-x", 40, 3, RandomSeed{9}), ValidationError);
}

TEST(FixtureTest, NoisyMembersCloserThanHoldout) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const FixtureCase c = MakeCase("noisy-0.1", 100, 6, RandomSeed{seed});
    const auto t = FittedTransformer::Fit(c.synthetic, EncodingMode::kOneHot,
                                          FitSource::kSynthetic);
    const NeighborIndex idx(t.Transform(c.synthetic).values);
    auto mean_nn = [&](const DataTable& q) {
      const Matrix m = t.Transform(q).values;
      double sum = 0;
      for (size_t i = 0; i < m.rows(); ++i) sum += idx.NearestDistance(m.Row(i));
      return sum / m.rows();
    };
    EXPECT_LT(mean_nn(c.train), mean_nn(c.holdout)) << seed;
  }
}

}  // namespace
}  // namespace tabaudit
