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

#include "tabaudit/audit.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "tabaudit/dcrprop.h"
#include "tabaudit/ingest.h"

namespace tabaudit {
namespace {

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::vector<AttackSpec> FamilyGrid(AttackFamily family) {
  std::vector<AttackSpec> out;
  switch (family) {
    case AttackFamily::kDpi:
    case AttackFamily::kGenLra:
      for (size_t k : kDefaultNeighborGrid) {
        out.push_back({family, {{"k", static_cast<double>(k)}}});
      }
      break;
    case AttackFamily::kLocalNeighborhood:
      out.push_back({family, {{"radius", 1.0}}});
      break;
    default:
      out.push_back({family, {}});
  }
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

nlohmann::ordered_json AuditConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["attacks"] = nlohmann::ordered_json::array();
  for (const auto& a : attacks) j["attacks"].push_back(a.ToJson());
  j["all"] = all;
  j["cap"] = cap;
  j["fpr_targets"] = metrics.fpr_targets;
  j["epsilon"] = {{"mode", EpsilonModeName(metrics.epsilon.mode)},
                  {"delta", metrics.epsilon.delta},
                  {"confidence", metrics.epsilon.confidence}};
  j["seed"] = seed.value;
  j["fit_source"] = FitSourceName(fit_source);
  j["dcr_prop"] = dcr_prop;
  j["bandwidth_rule"] = "scott (scalar, mean per-dimension std)";
  j["metric_definitions"] = {
      {"advantage", "max over thresholds of TPR - FPR"},
      {"privacy_gain", "1 - advantage"},
      {"accuracy", "max over thresholds of (TP + TN) / N"},
      {"brier", "mean squared error of min-max normalized scores"},
      {"max_mia", "max over implemented attack instances"}};
  return j;
}

std::vector<AttackSpec> DefaultGrid() {
  std::vector<AttackSpec> out;
  for (AttackFamily f : AllFamilies()) {
    for (auto& spec : FamilyGrid(f)) out.push_back(std::move(spec));
  }
  return out;
}

void ParseAttackSelection(const std::string& text, AuditConfig* config) {
  const std::string trimmed = Trim(text);
  if (trimmed.size() > 5 && trimmed.ends_with(".json")) {
    std::ifstream in(trimmed);
    if (!in) throw ValidationError(trimmed + ": cannot open attack file");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(trimmed + ": " + e.what());
    }
    if (!j.is_array()) {
      throw ValidationError(trimmed + ": expected a JSON array of attack specs");
    }
    for (const auto& item : j) config->attacks.push_back(AttackSpec::FromJson(item));
    return;
  }
  std::stringstream ss(trimmed);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    if (item == "all") {
      config->all = true;
    } else if (item.find(':') == std::string::npos) {
      for (auto& spec : FamilyGrid(ParseFamily(item))) {
        config->attacks.push_back(std::move(spec));
      }
    } else {
      config->attacks.push_back(AttackSpec::Parse(item));
    }
  }
}

std::vector<AttackSpec> ExpandGrid(const AuditConfig& config, bool calibrated,
                                   std::vector<std::string>* warnings) {
  std::vector<AttackSpec> candidates;
  if (config.all) candidates = DefaultGrid();
  candidates.insert(candidates.end(), config.attacks.begin(),
                    config.attacks.end());
  std::vector<AttackSpec> out;
  std::set<std::string> seen;
  std::set<std::string> dropped;
  for (const auto& spec : candidates) {
    if (!seen.insert(spec.Id()).second) continue;
    if (spec.requires_reference() && !calibrated) {
      if (dropped.insert(FamilyName(spec.family)).second && warnings) {
        warnings->push_back(std::string("dropped calibrated attack family ") +
                            FamilyName(spec.family) +
                            ": no reference table supplied");
      }
      continue;
    }
    out.push_back(spec);
  }
  if (out.empty()) {
    throw ValidationError("no runnable attack instances in the selection");
  }
  return out;
}

const MaxEntry* AuditReport::Max(const std::string& metric) const {
  for (const auto& m : max_mia) {
    if (m.metric == metric) return &m;
  }
  return nullptr;
}

const InstanceReport* AuditReport::Instance(const std::string& id) const {
  for (const auto& inst : instances) {
    if (inst.id == id) return &inst;
  }
  return nullptr;
}

size_t AuditReport::failures() const {
  return static_cast<size_t>(std::count_if(
      instances.begin(), instances.end(),
      [](const InstanceReport& r) { return !r.ok(); }));
}

nlohmann::ordered_json AuditReport::ToJson() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["tool_version"] = tool_version;
  j["config"] = config;
  j["datasets"] = datasets;
  j["transformers"] = transformers;
  j["instances"] = nlohmann::ordered_json::array();
  for (const auto& inst : instances) {
    nlohmann::ordered_json ji;
    ji["id"] = inst.id;
    ji["spec"] = inst.spec.ToJson();
    ji["status"] = inst.status;
    if (!inst.error.empty()) ji["error"] = inst.error;
    ji["metrics"] = inst.metrics ? inst.metrics->ToJson() : nlohmann::ordered_json();
    ji["runtime_s"] = inst.runtime_s ? nlohmann::ordered_json(*inst.runtime_s)
                                     : nlohmann::ordered_json();
    ji["seed"] = inst.seed;
    j["instances"].push_back(std::move(ji));
  }
  j["max_mia"] = nlohmann::ordered_json::object();
  for (const auto& m : max_mia) {
    j["max_mia"][m.metric] = {{"value", m.value}, {"argmax", m.argmax}};
  }
  j["warnings"] = warnings;
  if (dcr_prop) j["dcr_prop"] = *dcr_prop;
  return j;
}

AuditReport AuditReport::FromJson(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("version")) {
    throw ValidationError("not an audit report: missing \"version\"");
  }
  const std::string version =
      j["version"].is_string() ? j["version"].get<std::string>() : j["version"].dump();
  if (version != kReportVersion) {
    throw ValidationError("report version mismatch: got \"" + version +
                          "\", this tool reads version \"" + kReportVersion +
                          "\"");
  }
  AuditReport r;
  try {
    r.version = version;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config = j.at("config");
    r.datasets = j.at("datasets");
    r.transformers = j.at("transformers");
    for (const auto& ji : j.at("instances")) {
      InstanceReport inst;
      inst.id = ji.at("id").get<std::string>();
      inst.spec = AttackSpec::FromJson(ji.at("spec"));
      inst.status = ji.at("status").get<std::string>();
      if (ji.contains("error")) inst.error = ji["error"].get<std::string>();
      if (!ji.at("metrics").is_null()) {
        inst.metrics = MetricReport::FromJson(ji["metrics"]);
      }
      if (!ji.at("runtime_s").is_null()) {
        inst.runtime_s = ji["runtime_s"].get<double>();
      }
      inst.seed = ji.at("seed").get<uint64_t>();
      r.instances.push_back(std::move(inst));
    }
    for (const auto& [metric, entry] : j.at("max_mia").items()) {
      r.max_mia.push_back({metric, entry.at("value").get<double>(),
                           entry.at("argmax").get<std::string>()});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (j.contains("dcr_prop")) r.dcr_prop = j["dcr_prop"];
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed audit report: ") + e.what());
  }
  return r;
}

std::vector<MaxEntry> AggregateMax(const std::vector<InstanceReport>& instances) {
  std::vector<MaxEntry> out;
  for (const auto& inst : instances) {
    if (!inst.ok() || !inst.metrics) continue;
    for (const auto& [key, value] : inst.metrics->Scalars()) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const MaxEntry& m) { return m.metric == key; });
      if (it == out.end()) {
        out.push_back({key, value, inst.id});
      } else if (value > it->value) {
        it->value = value;
        it->argmax = inst.id;
      }
    }
  }
  return out;
}

AuditReport RunSuite(const Quadruple& quadruple, const AuditConfig& config) {
  AuditReport report;
  report.warnings = quadruple.warnings;
  const auto specs = ExpandGrid(config, quadruple.calibrated, &report.warnings);

  const TransformerPair transformers =
      FitTransformers(quadruple, config.fit_source);
  const EvalSet eval = BuildEvalSet(quadruple.train, quadruple.holdout,
                                    config.cap, config.seed.Child("eval"));
  const AttackInputs inputs = EncodeInputs(quadruple, eval, transformers);

  report.config = config.ToJson();
  nlohmann::ordered_json fingerprints, sizes;
  fingerprints["train"] = FingerprintHex(quadruple.train);
  fingerprints["holdout"] = FingerprintHex(quadruple.holdout);
  fingerprints["synthetic"] = FingerprintHex(quadruple.synthetic);
  sizes["train"] = quadruple.train.rows();
  sizes["holdout"] = quadruple.holdout.rows();
  sizes["synthetic"] = quadruple.synthetic.rows();
  if (quadruple.reference) {
    fingerprints["reference"] = FingerprintHex(*quadruple.reference);
    sizes["reference"] = quadruple.reference->rows();
  }
  const size_t members = static_cast<size_t>(
      std::count(eval.labels.begin(), eval.labels.end(), 1));
  sizes["eval_members"] = members;
  sizes["eval_nonmembers"] = eval.labels.size() - members;
  report.datasets["fingerprints"] = std::move(fingerprints);
  report.datasets["sizes"] = std::move(sizes);
  for (const FittedTransformer* t : {&transformers.onehot, &transformers.ordinal}) {
    report.transformers[EncodingModeName(t->mode())] = {{"digest", t->Digest()},
                                                        {"state", t->ToJson()}};
  }

  report.instances.resize(specs.size());
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) {
      InstanceReport& inst = report.instances[i];
      inst.spec = specs[i];
      inst.id = specs[i].Id();
      const RandomSeed seed = config.seed.Child("attack/" + inst.id);
      inst.seed = seed.value;
      const auto start = std::chrono::steady_clock::now();
      try {
        const AttackResult result = RunAttack(specs[i], inputs, seed);
        inst.metrics = ComputeMetrics(result, config.metrics);
        inst.status = "ok";
      } catch (const std::exception& e) {
        inst.status = "failed";
        inst.error = e.what();
      }
      if (config.record_timing) {
        inst.runtime_s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
      }
    }
  };
  size_t jobs = config.jobs == 0 ? std::thread::hardware_concurrency() : config.jobs;
  jobs = std::clamp<size_t>(jobs, 1, specs.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  for (const auto& inst : report.instances) {
    if (!inst.ok()) {
      report.warnings.push_back("attack " + inst.id + " failed: " + inst.error);
    }
  }
  if (report.failures() == report.instances.size()) {
    throw AllAttacksFailed("every attack instance failed; first error: " +
                           report.instances.front().error);
  }
  report.max_mia = AggregateMax(report.instances);

  if (config.dcr_prop) {
    if (quadruple.reference) {
      report.dcr_prop = DcrProp(quadruple.train, *quadruple.reference,
                                quadruple.synthetic, transformers.onehot)
                            .ToJson();
    } else {
      report.warnings.push_back("dcr_prop skipped: no reference table supplied");
    }
  }
  return report;
}

std::string RenderMarkdown(const AuditReport& report) {
  std::ostringstream out;
  out << "# Membership inference audit\n\n";
  out << "- tool: " << report.tool_version << " (report version "
      << report.version << ")\n";
  if (report.config.contains("seed")) {
    out << "- seed: " << report.config["seed"].dump() << "\n";
  }
  if (report.datasets.contains("sizes")) {
    const auto& sizes = report.datasets["sizes"];
    out << "- evaluation set: " << sizes.value("eval_members", 0) << " members, "
        << sizes.value("eval_nonmembers", 0) << " non-members\n";
  }
  out << "\n## Max over implemented attacks\n\n";
  out << "| metric | value | attack |\n|---|---|---|\n";
  for (const auto& m : report.max_mia) {
    out << "| " << m.metric << " | " << Fixed(m.value) << " | " << m.argmax
        << " |\n";
  }

  out << "\n## Attack instances\n\n";
  std::vector<std::string> columns;
  for (const auto& inst : report.instances) {
    if (inst.metrics) {
      for (const auto& [key, value] : inst.metrics->Scalars()) columns.push_back(key);
      break;
    }
  }
  out << "| attack | status |";
  for (const auto& c : columns) out << ' ' << c << " |";
  out << " runtime_s |\n|---|---|";
  for (size_t i = 0; i < columns.size(); ++i) out << "---|";
  out << "---|\n";
  for (const auto& inst : report.instances) {
    out << "| " << inst.id << " | " << inst.status << " |";
    if (inst.metrics) {
      for (const auto& [key, value] : inst.metrics->Scalars()) {
        out << ' ' << Fixed(value) << " |";
      }
    } else {
      for (size_t i = 0; i < columns.size(); ++i) out << " - |";
    }
    out << ' ' << (inst.runtime_s ? Fixed(*inst.runtime_s, 3) : "-") << " |\n";
  }

  if (report.dcr_prop) {
    const auto& d = *report.dcr_prop;
    out << "\n## DCR proportion\n\n";
    out << "- closer to reference (0.5 = balanced): "
        << Fixed(d["proportion_closer_to_reference"].get<double>()) << "\n";
    out << "- closer to train: "
        << Fixed(d["proportion_closer_to_train"].get<double>()) << "\n";
  }
  if (!report.warnings.empty()) {
    out << "\n## Warnings\n\n";
    for (const auto& w : report.warnings) out << "- " << w << "\n";
  }
  return out.str();
}

ReportComparison CompareReports(const AuditReport& a, const AuditReport& b) {
  ReportComparison cmp;
  for (const auto& ma : a.max_mia) {
    if (const MaxEntry* mb = b.Max(ma.metric)) {
      cmp.max_mia.push_back({ma.metric, ma.value, mb->value, mb->value - ma.value});
    }
  }
  if (cmp.max_mia.empty()) {
    throw ValidationError("reports share no max-MIA metric");
  }
  for (const auto& ia : a.instances) {
    const InstanceReport* ib = b.Instance(ia.id);
    if (!ib || !ia.metrics || !ib->metrics) continue;
    InstanceDelta d{ia.id, {}};
    const auto sb = ib->metrics->Scalars();
    for (const auto& [key, va] : ia.metrics->Scalars()) {
      for (const auto& [kb, vb] : sb) {
        if (kb == key) d.metrics.push_back({key, va, vb, vb - va});
      }
    }
    cmp.instances.push_back(std::move(d));
  }
  cmp.verdict = "unchanged";
  for (const auto& m : cmp.max_mia) {
    if (m.metric != "auc") continue;
    if (m.delta > 0) cmp.verdict = "leakier";
    if (m.delta < 0) cmp.verdict = "less leaky";
  }
  return cmp;
}

std::string RenderComparison(const ReportComparison& comparison) {
  std::ostringstream out;
  out << "# Audit comparison (b - a)\n\n";
  out << "verdict: " << comparison.verdict << "\n\n";
  out << "| metric | a | b | delta |\n|---|---|---|---|\n";
  for (const auto& m : comparison.max_mia) {
    out << "| " << m.metric << " | " << Fixed(m.a) << " | " << Fixed(m.b) << " | "
        << (m.delta > 0 ? "+" : "") << Fixed(m.delta) << " |\n";
  }
  if (!comparison.instances.empty()) {
    out << "\n| attack | delta auc | delta tpr_at_fpr_0p1 |\n|---|---|---|\n";
    for (const auto& inst : comparison.instances) {
      std::string auc = "-", tpr = "-";
      for (const auto& m : inst.metrics) {
        if (m.metric == "auc") auc = Fixed(m.delta);
        if (m.metric == "tpr_at_fpr_0p1") tpr = Fixed(m.delta);
      }
      out << "| " << inst.id << " | " << auc << " | " << tpr << " |\n";
    }
  }
  return out.str();
}

}  // namespace tabaudit
