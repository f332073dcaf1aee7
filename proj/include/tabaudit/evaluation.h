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

#ifndef TABAUDIT_EVALUATION_H_
#define TABAUDIT_EVALUATION_H_

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tabaudit/core.h"

namespace tabaudit {

// Empirical ROC under the rule "member iff score > gamma". Point 0 is the
// +infinity sentinel (0, 0). Point j >= 1 is attached to the j-th largest
// distinct score s_j and describes every gamma in [s_{j+1}, s_j), i.e. the
// targets with score >= s_j; tied scores therefore share one point, and the
// last point is (1, 1).
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<size_t> true_positives;
  std::vector<size_t> false_positives;
  std::vector<double> tpr;
  std::vector<double> fpr;
  size_t positives = 0;
  size_t negatives = 0;
};

RocCurve Roc(const AttackResult& result);

// Mann-Whitney: P(member score > non-member score) + P(tie) / 2.
double Auc(const AttackResult& result);

// Largest TPR over operating points whose FPR <= alpha; no interpolation.
double TprAtFpr(const AttackResult& result, double alpha);
double TprAtFpr(const RocCurve& roc, double alpha);

// advantage = max over points of TPR - FPR (>= 0 via the sentinel);
// privacy gain = 1 - advantage.
std::pair<double, double> AdvantageAndPrivacyGain(const AttackResult& result);

// max over points of (TP + TN) / N.
double AccuracyBest(const AttackResult& result);

// Scores min-max normalized over the evaluation set (constant scores become
// 0.5), then the mean squared error against the labels.
double Brier(const AttackResult& result);

enum class EpsilonMode { kPoint, kClopperPearson };

const char* EpsilonModeName(EpsilonMode mode);
EpsilonMode ParseEpsilonMode(const std::string& name);

struct EpsilonConfig {
  EpsilonMode mode = EpsilonMode::kPoint;
  double delta = 0.0;
  double confidence = 0.95;
};

// Largest ln((TPR - delta) / FPR) over operating points of the test and of
// its flipped version (scores negated), considering points with
// TPR > delta, clamped below at 0.
//   point:           FPR floored at 1 / (3 * n_nonmembers).
//   clopper_pearson: TPR replaced by its one-sided lower bound and FPR by its
//                    one-sided upper bound at `confidence`.
// Throws std::invalid_argument unless 0 <= delta < 1 and 0 < confidence < 1.
double EffectiveEpsilon(const AttackResult& result, const EpsilonConfig& config);

// Exact one-sided Clopper-Pearson bounds for k successes out of n.
double ClopperPearsonLower(size_t k, size_t n, double confidence);
double ClopperPearsonUpper(size_t k, size_t n, double confidence);

struct MetricConfig {
  std::vector<double> fpr_targets = {0.0, 0.001, 0.01, 0.1};
  EpsilonConfig epsilon;
};

struct MetricReport {
  double auc = 0.0;
  // (fpr target, tpr) sorted by target.
  std::vector<std::pair<double, double>> tpr_at_fpr;
  double accuracy = 0.0;
  double advantage = 0.0;
  double privacy_gain = 1.0;
  double brier = 0.0;
  double effective_epsilon = 0.0;
  size_t n_members = 0;
  size_t n_nonmembers = 0;

  // Flat object: auc, tpr_at_fpr_0, tpr_at_fpr_0p001, ..., n_nonmembers.
  nlohmann::ordered_json ToJson() const;
  static MetricReport FromJson(const nlohmann::ordered_json& j);

  // Scalar metrics by JSON key, in serialization order (counts excluded).
  std::vector<std::pair<std::string, double>> Scalars() const;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// "tpr_at_fpr_0p001" for 0.001.
std::string TprKey(double fpr_target);

MetricReport ComputeMetrics(const AttackResult& result,
                            const MetricConfig& config);

}  // namespace tabaudit

#endif  // TABAUDIT_EVALUATION_H_
