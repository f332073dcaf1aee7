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

#include "tabaudit/attacks.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tabaudit/evaluation.h"
#include "tabaudit/harness.h"
#include "test_util.h"

namespace tabaudit {
namespace {

using testutil::Column;
using testutil::M;

TEST(AttackSpecTest, ThreatModelColumn) {
  const std::map<std::string, bool> want = {
      {"dcr", false},    {"dcr_diff", true},   {"density", false},
      {"domias", true},  {"dpi", true},        {"gen_lra", true},
      {"local_neighborhood", false},           {"logan", true},
      {"classifier", true},                    {"mc", false}};
  ASSERT_EQ(AllFamilies().size(), want.size());
  for (AttackFamily f : AllFamilies()) {
    EXPECT_EQ(RequiresReference(f), want.at(FamilyName(f))) << FamilyName(f);
    EXPECT_EQ(ParseFamily(FamilyName(f)), f);
  }
  EXPECT_THROW(ParseFamily("bnaf"), ValidationError);
}

TEST(AttackSpecTest, OrdinalOnlyForKdeFamilies) {
  for (AttackFamily f : AllFamilies()) {
    const bool kde = f == AttackFamily::kDensity || f == AttackFamily::kDomias ||
                     f == AttackFamily::kGenLra;
    EXPECT_EQ(EncodingFor(f) == EncodingMode::kOrdinal, kde) << FamilyName(f);
  }
}

TEST(AttackSpecTest, IdsParseAndJson) {
  const AttackSpec dpi = AttackSpec::Parse("dpi:k=25");
  EXPECT_EQ(dpi.Id(), "dpi[k=25]");
  EXPECT_EQ(AttackSpec::Parse("dcr").Id(), "dcr");
  EXPECT_EQ(AttackSpec::Parse("local_neighborhood:radius=0.5").Id(),
            "local_neighborhood[radius=0.5]");
  EXPECT_EQ(AttackSpec::FromJson(nlohmann::json::parse(dpi.ToJson().dump())), dpi);
  EXPECT_EQ(dpi.ToJson().dump(), R"({"family":"dpi","k":25})");
  EXPECT_THROW(AttackSpec::Parse("dpi:q=3").Resolved(), ValidationError);
  EXPECT_EQ(AttackSpec::Parse("gen_lra").Resolved().at("k"), 5.0);
}

TEST(DcrTest, Examples) {
  const Matrix s = M({{0, 0}, {1, 1}});
  const auto out = DcrScores(M({{3, 4}, {1, 1}}), s);
  EXPECT_NEAR(out[0], -std::sqrt(13.0), 1e-12);
  EXPECT_EQ(out[1], 0.0);
}

TEST(DcrDiffTest, Examples) {
  EXPECT_DOUBLE_EQ(DcrDiffScores(Column({1}), Column({0}), Column({10}))[0], 8.0);
  EXPECT_DOUBLE_EQ(DcrDiffScores(Column({5}), Column({0}), Column({10}))[0], 0.0);
}

TEST(DensityTest, CenterBeatsTail) {
  const auto out = DensityScores(Column({0, 5}), Column({-1, 1}));
  EXPECT_GT(out[0], out[1]);
}

TEST(DomiasTest, IdentityAndDirection) {
  const Matrix s = Column({-0.3, 0, 0.2, 0.4});
  for (double v : DomiasScores(Column({0, 3, -7}), s, s)) EXPECT_EQ(v, 0.0);
  const auto out = DomiasScores(Column({0, 10}), Column({-0.2, 0, 0.3}),
                                Column({9.8, 10, 10.3}));
  EXPECT_GT(out[0], 0.0);
  EXPECT_LT(out[1], 0.0);
}

TEST(DpiTest, Examples) {
  const Matrix s = Column({0, 0.1, 0.2});
  const Matrix r = Column({5, 6, 7});
  EXPECT_DOUBLE_EQ(DpiScores(Column({0.05}), s, r, 3)[0], 7.0);
  EXPECT_DOUBLE_EQ(DpiScores(Column({6}), s, r, 3)[0], 1.0 / 7.0);
  // One of each among the two nearest.
  EXPECT_DOUBLE_EQ(DpiScores(Column({2.6}), Column({0}), Column({5}), 2)[0], 1.0);
  EXPECT_THROW(DpiScores(Column({0}), s, r, 7), ValidationError);
}

// Direct 1-D evaluation: sum over the k nearest synthetic points of
// log KDE_{R + x, h'}(s) - log KDE_{R, h}(s).
double GenLraOracle(double x, const std::vector<double>& s,
                    const std::vector<double>& r, size_t k) {
  auto scott = [](const std::vector<double>& v) {
    double mean = 0;
    for (double a : v) mean += a / v.size();
    double ss = 0;
    for (double a : v) ss += (a - mean) * (a - mean);
    const double sd = std::sqrt(ss / (v.size() - 1));
    return std::max(1e-6, sd * std::pow(static_cast<double>(v.size()), -0.2));
  };
  auto kde = [](const std::vector<double>& pts, double h, double q) {
    double sum = 0;
    for (double p : pts) sum += std::exp(-(p - q) * (p - q) / (2 * h * h));
    return sum / (pts.size() * std::sqrt(2 * std::numbers::pi) * h);
  };
  std::vector<double> r_plus = r;
  r_plus.push_back(x);
  std::vector<std::pair<double, size_t>> order;
  for (size_t i = 0; i < s.size(); ++i) order.emplace_back(std::abs(s[i] - x), i);
  std::sort(order.begin(), order.end());
  double score = 0;
  for (size_t j = 0; j < k; ++j) {
    const double p = s[order[j].second];
    score += std::log(kde(r_plus, scott(r_plus), p)) - std::log(kde(r, scott(r), p));
  }
  return score;
}

TEST(GenLraTest, MatchesDirectOracle) {
  const std::vector<double> s = {0, 0.1, 0.3, 2.5, 4};
  const std::vector<double> r = {-1, 0.5, 1.5, 3, 5, 6};
  Matrix sm, rm;
  for (double v : s) sm.AppendRow(std::vector<double>{v});
  for (double v : r) rm.AppendRow(std::vector<double>{v});
  const Matrix targets = Column({0.05, 2.0, 8.0});
  for (size_t k : {1u, 3u, 5u}) {
    const auto got = GenLraScores(targets, sm, rm, k);
    for (size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(got[i], GenLraOracle(targets(i, 0), s, r, k), 1e-9);
    }
  }
}

TEST(GenLraTest, ClusterVersusFar) {
  const Matrix s = Column({0, 0.05, 0.1, -0.05});
  const Matrix r = Column({5, 6, 7, 8});
  const auto out = GenLraScores(Column({0, 50}), s, r, 3);
  EXPECT_GT(out[0], 0.0);
  EXPECT_LT(out[1], out[0]);
}

TEST(LocalNeighborhoodTest, Examples) {
  const Matrix s = Column({0, 0.5, 2.0});
  EXPECT_EQ(LocalNeighborhoodScores(Column({0.2}), s, 1.0)[0], 2.0);
  EXPECT_EQ(LocalNeighborhoodScores(Column({100}), s, 1.0)[0], 0.0);
}

TEST(McTest, Examples) {
  const Matrix s = Column({0, 1});
  EXPECT_DOUBLE_EQ(McRadius(s), 1.0);
  EXPECT_DOUBLE_EQ(McScores(Column({0.4}), s)[0], 1.0);
  EXPECT_DOUBLE_EQ(McScores(Column({3}), s)[0], 0.0);
}

TEST(ClassifierTest, SeparatedGaussians) {
  Rng rng(RandomSeed{1});
  Matrix s, r;
  for (int i = 0; i < 60; ++i) {
    s.AppendRow(std::vector<double>{rng.Normal(), rng.Normal()});
    r.AppendRow(std::vector<double>{rng.Normal() + 8, rng.Normal() + 8});
  }
  EXPECT_GT(ClassifierScores(M({{0, 0}}), s, r, ForestConfig{}, RandomSeed{2})[0], 0.9);
  MlpConfig c;
  c.hidden = 16;
  c.epochs = 100;
  c.learning_rate = 1e-2;
  EXPECT_GT(LoganScores(M({{0, 0}}), s, r, c, RandomSeed{2})[0], 0.9);
}

TEST(ClassifierTest, NullCaseNearHalf) {
  double mean_auc = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(RandomSeed{100 + seed});
    Matrix s, targets;
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) s.AppendRow(std::vector<double>{rng.Normal(), rng.Normal()});
    for (int i = 0; i < 60; ++i) {
      targets.AppendRow(std::vector<double>{rng.Normal(), rng.Normal()});
      labels.push_back(i % 2);
    }
    ForestConfig c;
    c.trees = 30;
    const auto scores = ClassifierScores(targets, s, s, c, RandomSeed{seed});
    mean_auc += Auc(AttackResult("classifier", scores, labels)) / 10;
  }
  EXPECT_NEAR(mean_auc, 0.5, 0.07);
}

Quadruple SmallQuadruple(bool with_reference) {
  FixtureCase c = MakeCase("noisy-0.1", 40, 3, RandomSeed{5});
  std::optional<DataTable> ref;
  if (with_reference) ref = c.reference;
  return ValidateQuadruple(c.train, c.holdout, c.synthetic, ref);
}

TEST(RunAttackTest, ThreatModelEnforced) {
  const Quadruple q = SmallQuadruple(false);
  const EvalSet e = BuildEvalSet(q.train, q.holdout, 1000, RandomSeed{1});
  const AttackInputs in = EncodeInputs(q, e, FitTransformers(q, FitSource::kSynthetic));
  EXPECT_FALSE(in.calibrated());
  const AttackResult r = RunAttack(AttackSpec::Parse("dcr"), in, RandomSeed{1});
  EXPECT_EQ(r.size(), e.labels.size());
  EXPECT_EQ(r.attack_id(), "dcr");
  EXPECT_THROW(RunAttack(AttackSpec::Parse("domias"), in, RandomSeed{1}),
               ValidationError);
}

TEST(RunAttackTest, Deterministic) {
  const Quadruple q = SmallQuadruple(true);
  const EvalSet e = BuildEvalSet(q.train, q.holdout, 1000, RandomSeed{1});
  const AttackInputs in = EncodeInputs(q, e, FitTransformers(q, FitSource::kSynthetic));
  for (const char* spec : {"logan:epochs=5", "classifier:trees=5", "gen_lra:k=3"}) {
    const AttackResult a = RunAttack(AttackSpec::Parse(spec), in, RandomSeed{3});
    const AttackResult b = RunAttack(AttackSpec::Parse(spec), in, RandomSeed{3});
    EXPECT_EQ(a.scores(), b.scores()) << spec;
    EXPECT_EQ(a.hyperparams(), b.hyperparams());
  }
}

TEST(AttackPropertyTest, DcrMonotoneUnderFarPoint) {
  Rng rng(RandomSeed{31});
  Matrix s, t;
  for (int i = 0; i < 20; ++i) {
    s.AppendRow(std::vector<double>{rng.Normal(), rng.Normal()});
    t.AppendRow(std::vector<double>{rng.Normal(), rng.Normal()});
  }
  const auto before = DcrScores(t, s);
  s.AppendRow(std::vector<double>{50, 50});
  const auto after = DcrScores(t, s);
  for (size_t i = 0; i < before.size(); ++i) EXPECT_GE(after[i], before[i]);
}

TEST(AttackPropertyTest, DpiOrderFollowsSyntheticCount) {
  Rng rng(RandomSeed{32});
  Matrix s, r, t;
  for (int i = 0; i < 30; ++i) {
    s.AppendRow(std::vector<double>{rng.Normal()});
    r.AppendRow(std::vector<double>{rng.Normal() + 1});
    t.AppendRow(std::vector<double>{rng.Normal() + 0.5});
  }
  const size_t k = 7;
  const auto scores = DpiScores(t, s, r, k);
  for (size_t i = 0; i < scores.size(); ++i) {
    // Invert (c + .5) / (k - c + .5) back to c.
    const double c = (scores[i] * (k + 0.5) - 0.5) / (1 + scores[i]);
    EXPECT_NEAR(c, std::round(c), 1e-9);
    for (size_t j = 0; j < scores.size(); ++j) {
      const double cj = (scores[j] * (k + 0.5) - 0.5) / (1 + scores[j]);
      if (std::round(c) > std::round(cj)) EXPECT_GT(scores[i], scores[j]);
    }
  }
}

Matrix Permuted(const Matrix& m, uint64_t seed) {
  Rng rng(RandomSeed{seed});
  const auto order = rng.Permutation(m.rows());
  return m.SelectRows(order);
}

TEST(AttackPropertyTest, SyntheticRowOrderDoesNotMatter) {
  const FixtureCase c = MakeCase("noisy-0.2", 150, 3, RandomSeed{33});
  const Quadruple q = ValidateQuadruple(c.train, c.holdout, c.synthetic, c.reference);
  const EvalSet e = BuildEvalSet(q.train, q.holdout, 1000, RandomSeed{1});
  const AttackInputs base = EncodeInputs(q, e, FitTransformers(q, FitSource::kSynthetic));
  const std::vector<std::string> exact = {"dcr", "dcr_diff", "density", "domias",
                                          "dpi:k=5", "gen_lra:k=5",
                                          "local_neighborhood", "mc"};
  const std::vector<std::string> learned = {"logan:epochs=30:hidden=32",
                                            "classifier"};
  for (uint64_t trial = 0; trial < 5; ++trial) {
    AttackInputs shuffled = base;
    for (EncodedViews* v : {&shuffled.onehot, &shuffled.ordinal}) {
      v->synthetic = Permuted(v->synthetic, 100 + trial);
      *v->reference = Permuted(*v->reference, 200 + trial);
    }
    for (const auto& spec : exact) {
      const auto a = RunAttack(AttackSpec::Parse(spec), base, RandomSeed{1});
      const auto b = RunAttack(AttackSpec::Parse(spec), shuffled, RandomSeed{1});
      for (size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a.scores()[i], b.scores()[i], 1e-9) << spec;
      }
    }
    for (const auto& spec : learned) {
      const double a = Auc(RunAttack(AttackSpec::Parse(spec), base, RandomSeed{1}));
      const double b = Auc(RunAttack(AttackSpec::Parse(spec), shuffled, RandomSeed{1}));
      EXPECT_LT(std::abs(a - b), 0.02) << spec << " trial " << trial;
    }
  }
}

}  // namespace
}  // namespace tabaudit
