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

#include "tabaudit/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace tabaudit {
namespace {

void CheckEpsilonConfig(const EpsilonConfig& config) {
  if (!(config.delta >= 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in [0, 1)");
  }
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw std::invalid_argument("confidence must lie in (0, 1)");
  }
}

double Ratio(size_t count, size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

// Candidate ln((TPR - delta) / FPR) for one operating point given as counts.
// Returns -infinity when the point does not qualify.
double EpsilonAt(size_t tp, size_t fp, size_t positives, size_t negatives,
                 const EpsilonConfig& config) {
  double tpr, fpr;
  if (config.mode == EpsilonMode::kPoint) {
    tpr = Ratio(tp, positives);
    fpr = std::max(Ratio(fp, negatives),
                   1.0 / (3.0 * static_cast<double>(negatives)));
  } else {
    tpr = ClopperPearsonLower(tp, positives, config.confidence);
    fpr = ClopperPearsonUpper(fp, negatives, config.confidence);
  }
  if (!(tpr > config.delta)) return -std::numeric_limits<double>::infinity();
  return std::log((tpr - config.delta) / fpr);
}

}  // namespace

RocCurve Roc(const AttackResult& result) {
  const auto& scores = result.scores();
  const auto& labels = result.labels();
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.positives = result.members();
  roc.negatives = result.nonmembers();
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.true_positives.push_back(0);
  roc.false_positives.push_back(0);
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] ? tp : fp)++;
      ++i;
    }
    roc.thresholds.push_back(s);
    roc.true_positives.push_back(tp);
    roc.false_positives.push_back(fp);
  }
  for (size_t j = 0; j < roc.thresholds.size(); ++j) {
    roc.tpr.push_back(Ratio(roc.true_positives[j], roc.positives));
    roc.fpr.push_back(Ratio(roc.false_positives[j], roc.negatives));
  }
  return roc;
}

double Auc(const AttackResult& result) {
  const auto& scores = result.scores();
  const auto& labels = result.labels();
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Integer counts keep the statistic exact: 2 * wins + ties over 2 * P * N.
  uint64_t wins = 0, ties = 0, negatives_below = 0;
  for (size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    uint64_t pos = 0, neg = 0;
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] ? pos : neg)++;
      ++i;
    }
    wins += pos * negatives_below;
    ties += pos * neg;
    negatives_below += neg;
  }
  const uint64_t pairs = static_cast<uint64_t>(result.members()) *
                         static_cast<uint64_t>(result.nonmembers());
  return static_cast<double>(2 * wins + ties) / static_cast<double>(2 * pairs);
}

double TprAtFpr(const RocCurve& roc, double alpha) {
  double best = 0.0;
  for (size_t j = 0; j < roc.tpr.size(); ++j) {
    if (roc.fpr[j] <= alpha) best = std::max(best, roc.tpr[j]);
  }
  return best;
}

double TprAtFpr(const AttackResult& result, double alpha) {
  return TprAtFpr(Roc(result), alpha);
}

std::pair<double, double> AdvantageAndPrivacyGain(const AttackResult& result) {
  const RocCurve roc = Roc(result);
  double adv = 0.0;
  for (size_t j = 0; j < roc.tpr.size(); ++j) {
    adv = std::max(adv, roc.tpr[j] - roc.fpr[j]);
  }
  return {adv, 1.0 - adv};
}

double AccuracyBest(const AttackResult& result) {
  const RocCurve roc = Roc(result);
  double best = 0.0;
  for (size_t j = 0; j < roc.tpr.size(); ++j) {
    const size_t correct =
        roc.true_positives[j] + (roc.negatives - roc.false_positives[j]);
    best = std::max(best, Ratio(correct, roc.positives + roc.negatives));
  }
  return best;
}

double Brier(const AttackResult& result) {
  const auto& scores = result.scores();
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo, max = *hi;
  double sum = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    // Halved so that clamped +/-1e308 scores cannot overflow the range.
    const double p = max > min ? (0.5 * scores[i] - 0.5 * min) /
                                     (0.5 * max - 0.5 * min)
                               : 0.5;
    const double err = p - result.labels()[i];
    sum += err * err;
  }
  return sum / static_cast<double>(scores.size());
}

const char* EpsilonModeName(EpsilonMode mode) {
  return mode == EpsilonMode::kPoint ? "point" : "clopper_pearson";
}

EpsilonMode ParseEpsilonMode(const std::string& name) {
  if (name == "point") return EpsilonMode::kPoint;
  if (name == "cp" || name == "clopper_pearson") {
    return EpsilonMode::kClopperPearson;
  }
  throw ValidationError("unknown epsilon mode \"" + name +
                        "\" (expected point or cp)");
}

double ClopperPearsonLower(size_t k, size_t n, double confidence) {
  if (k == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(k),
                                static_cast<double>(n - k + 1),
                                1.0 - confidence);
}

double ClopperPearsonUpper(size_t k, size_t n, double confidence) {
  if (k >= n) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(k + 1),
                                static_cast<double>(n - k), confidence);
}

double EffectiveEpsilon(const AttackResult& result,
                        const EpsilonConfig& config) {
  CheckEpsilonConfig(config);
  const RocCurve roc = Roc(result);
  const size_t p = roc.positives, n = roc.negatives;
  double eps = 0.0;
  for (size_t j = 0; j < roc.thresholds.size(); ++j) {
    const size_t tp = roc.true_positives[j];
    const size_t fp = roc.false_positives[j];
    eps = std::max(eps, EpsilonAt(tp, fp, p, n, config));
    // The flipped test predicts "member" for the complement of this point.
    eps = std::max(eps, EpsilonAt(p - tp, n - fp, p, n, config));
  }
  return eps;
}

std::string TprKey(double fpr_target) {
  std::string text = FormatShortest(fpr_target);
  std::replace(text.begin(), text.end(), '.', 'p');
  return "tpr_at_fpr_" + text;
}

std::vector<std::pair<std::string, double>> MetricReport::Scalars() const {
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("auc", auc);
  for (const auto& [target, tpr] : tpr_at_fpr) out.emplace_back(TprKey(target), tpr);
  out.emplace_back("accuracy", accuracy);
  out.emplace_back("advantage", advantage);
  out.emplace_back("privacy_gain", privacy_gain);
  out.emplace_back("brier", brier);
  out.emplace_back("effective_epsilon", effective_epsilon);
  return out;
}

nlohmann::ordered_json MetricReport::ToJson() const {
  nlohmann::ordered_json j;
  for (const auto& [key, value] : Scalars()) j[key] = value;
  j["n_members"] = n_members;
  j["n_nonmembers"] = n_nonmembers;
  return j;
}

MetricReport MetricReport::FromJson(const nlohmann::ordered_json& j) {
  MetricReport r;
  try {
    r.auc = j.at("auc").get<double>();
    r.accuracy = j.at("accuracy").get<double>();
    r.advantage = j.at("advantage").get<double>();
    r.privacy_gain = j.at("privacy_gain").get<double>();
    r.brier = j.at("brier").get<double>();
    r.effective_epsilon = j.at("effective_epsilon").get<double>();
    r.n_members = j.at("n_members").get<size_t>();
    r.n_nonmembers = j.at("n_nonmembers").get<size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed metrics object: ") + e.what());
  }
  constexpr std::string_view kPrefix = "tpr_at_fpr_";
  for (const auto& [key, value] : j.items()) {
    if (!key.starts_with(kPrefix)) continue;
    std::string text = key.substr(kPrefix.size());
    std::replace(text.begin(), text.end(), 'p', '.');
    r.tpr_at_fpr.emplace_back(std::strtod(text.c_str(), nullptr),
                              value.get<double>());
  }
  std::sort(r.tpr_at_fpr.begin(), r.tpr_at_fpr.end());
  return r;
}

MetricReport ComputeMetrics(const AttackResult& result,
                            const MetricConfig& config) {
  MetricReport r;
  const RocCurve roc = Roc(result);
  r.auc = Auc(result);
  std::vector<double> targets = config.fpr_targets;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (double t : targets) r.tpr_at_fpr.emplace_back(t, TprAtFpr(roc, t));
  std::tie(r.advantage, r.privacy_gain) = AdvantageAndPrivacyGain(result);
  r.accuracy = AccuracyBest(result);
  r.brier = Brier(result);
  r.effective_epsilon = EffectiveEpsilon(result, config.epsilon);
  r.n_members = result.members();
  r.n_nonmembers = result.nonmembers();
  return r;
}

}  // namespace tabaudit
