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

#ifndef TABAUDIT_AUDIT_H_
#define TABAUDIT_AUDIT_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabaudit/attacks.h"
#include "tabaudit/core.h"
#include "tabaudit/evaluation.h"
#include "tabaudit/preprocess.h"

namespace tabaudit {

inline constexpr const char* kReportVersion = "1";
inline constexpr const char* kToolVersion = "tabaudit 0.1.0";

// Neighborhood sizes swept by dpi and gen_lra in the default grid.
inline constexpr size_t kDefaultNeighborGrid[] = {1, 5, 10, 25, 50, 100};

struct AuditConfig {
  // Explicit instances; combined with the default grid when `all` is set.
  std::vector<AttackSpec> attacks;
  bool all = false;
  size_t cap = 1000;
  MetricConfig metrics;
  RandomSeed seed;
  FitSource fit_source = FitSource::kSynthetic;
  // Worker threads; 0 means one per hardware thread. Never affects results.
  size_t jobs = 1;
  // Wall-clock per instance; off by default so reports stay byte-stable.
  bool record_timing = false;
  bool dcr_prop = false;

  // Everything that influences results (jobs and timing excluded).
  nlohmann::ordered_json ToJson() const;
};

// The 20-instance grid: dcr, dcr_diff, density, domias, dpi and gen_lra for
// every k in kDefaultNeighborGrid, local_neighborhood at radius 1, logan,
// classifier and mc.
std::vector<AttackSpec> DefaultGrid();

// Parses "all", a family name (its default-grid instances) or "family:key=v"
// items from a comma-separated list. A path ending in ".json" is read as a
// JSON array of attack specs.
void ParseAttackSelection(const std::string& text, AuditConfig* config);

// Expands the selection into instances, dropping duplicates and, when no
// reference is available, calibrated families (one warning per dropped
// family). Throws ValidationError when nothing is left.
std::vector<AttackSpec> ExpandGrid(const AuditConfig& config, bool calibrated,
                                   std::vector<std::string>* warnings = nullptr);

struct InstanceReport {
  std::string id;
  AttackSpec spec;
  std::string status;  // "ok" or "failed"
  std::string error;
  std::optional<MetricReport> metrics;
  std::optional<double> runtime_s;
  uint64_t seed = 0;

  bool ok() const { return status == "ok"; }
};

struct MaxEntry {
  std::string metric;
  double value = 0.0;
  std::string argmax;
  friend bool operator==(const MaxEntry&, const MaxEntry&) = default;
};

struct AuditReport {
  std::string version = kReportVersion;
  std::string tool_version = kToolVersion;
  nlohmann::ordered_json config;
  nlohmann::ordered_json datasets;
  nlohmann::ordered_json transformers;
  std::vector<InstanceReport> instances;
  std::vector<MaxEntry> max_mia;
  std::vector<std::string> warnings;
  std::optional<nlohmann::ordered_json> dcr_prop;

  const MaxEntry* Max(const std::string& metric) const;
  const InstanceReport* Instance(const std::string& id) const;
  size_t failures() const;

  nlohmann::ordered_json ToJson() const;
  // Throws ValidationError on a version mismatch or malformed content.
  static AuditReport FromJson(const nlohmann::ordered_json& j);
};

// Max over successful instances of every scalar metric; ties go to the
// earliest instance.
std::vector<MaxEntry> AggregateMax(const std::vector<InstanceReport>& instances);

class AllAttacksFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fits both encoders once, builds the evaluation set once, runs every
// instance with its own child seed and assembles the report in grid order.
// Failing instances are recorded and excluded from the maxima; throws
// AllAttacksFailed when none succeeds.
AuditReport RunSuite(const Quadruple& quadruple, const AuditConfig& config);

std::string RenderMarkdown(const AuditReport& report);

struct MetricDelta {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  // b - a
};

struct InstanceDelta {
  std::string id;
  std::vector<MetricDelta> metrics;
};

struct ReportComparison {
  std::vector<MetricDelta> max_mia;
  std::vector<InstanceDelta> instances;  // ids present and ok in both
  // "leakier" when b's Max-AUC exceeds a's, "less leaky" when lower,
  // "unchanged" otherwise.
  std::string verdict;
};

// Throws ValidationError when the reports share no max-MIA metric.
ReportComparison CompareReports(const AuditReport& a, const AuditReport& b);
std::string RenderComparison(const ReportComparison& comparison);

}  // namespace tabaudit

#endif  // TABAUDIT_AUDIT_H_
