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

#include "tabaudit/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tabaudit/audit.h"
#include "tabaudit/harness.h"
#include "tabaudit/ingest.h"

namespace tabaudit {
namespace {

namespace fs = std::filesystem;

struct AuditFlags {
  std::string train, holdout, synthetic, reference, schema;
  std::string attacks = "all";
  std::optional<uint64_t> seed;
  size_t cap = 1000;
  std::string fpr_targets = "0,0.001,0.01,0.1";
  std::string epsilon_mode = "point";
  double delta = 0.0;
  double confidence = 0.95;
  std::string fit_source = "synthetic";
  std::string out, md;
  size_t jobs = 1;
  bool verbose = false;
  bool timing = false;
  bool dcr_prop = false;
};

struct SplitFlags {
  std::string input, out_dir, schema;
  uint64_t seed = 0;
  double test_fraction = 0.2;
};

struct ReportFlags {
  std::string in, compare, out;
  std::string format = "md";
};

struct FixtureFlags {
  std::string fixture, out_dir;
  size_t n = 200;
  size_t d = 10;
  uint64_t seed = 0;
};

std::vector<double> ParseDoubleList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("bad FPR target \"" + item + "\" (expected [0, 1])");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("no FPR targets given");
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError(path.string() + ": cannot write file");
  f << text;
}

nlohmann::ordered_json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": malformed JSON: " + e.what());
  }
}

int CmdAudit(const AuditFlags& f, std::ostream& out, std::ostream& err) {
  std::optional<TableSchema> schema;
  if (!f.schema.empty()) schema = ReadSchema(f.schema);
  if (f.verbose) out << "reading tables\n";
  DataTable train = ReadTable(f.train, schema);
  DataTable holdout = ReadTable(f.holdout, schema);
  DataTable synthetic = ReadTable(f.synthetic, schema);
  std::optional<DataTable> reference;
  if (!f.reference.empty()) reference = ReadTable(f.reference, schema);
  const Quadruple q = ValidateQuadruple(std::move(train), std::move(holdout),
                                        std::move(synthetic), std::move(reference));

  AuditConfig config;
  ParseAttackSelection(f.attacks, &config);
  config.cap = f.cap;
  if (config.cap == 0) throw ValidationError("--cap must be >= 1");
  config.metrics.fpr_targets = ParseDoubleList(f.fpr_targets);
  config.metrics.epsilon.mode = ParseEpsilonMode(f.epsilon_mode);
  config.metrics.epsilon.delta = f.delta;
  config.metrics.epsilon.confidence = f.confidence;
  if (!(f.delta >= 0.0 && f.delta < 1.0)) {
    throw ValidationError("--delta must lie in [0, 1)");
  }
  if (!(f.confidence > 0.0 && f.confidence < 1.0)) {
    throw ValidationError("--confidence must lie in (0, 1)");
  }
  config.seed = RandomSeed{*f.seed};
  config.fit_source = ParseFitSource(f.fit_source);
  config.jobs = f.jobs;
  config.record_timing = f.timing;
  config.dcr_prop = f.dcr_prop;

  if (f.verbose) out << "running audit\n";
  AuditReport report;
  try {
    report = RunSuite(q, config);
  } catch (const AllAttacksFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitAttackFailed;
  }
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  WriteText(f.out, report.ToJson().dump(2) + "\n");
  if (!f.md.empty()) WriteText(f.md, RenderMarkdown(report));
  if (f.verbose) {
    out << "wrote " << f.out << " (" << report.instances.size()
        << " instances)\n";
  }
  return report.failures() > 0 ? kExitAttackFailed : kExitOk;
}

int CmdSplit(const SplitFlags& f, std::ostream& out) {
  std::optional<TableSchema> schema;
  if (!f.schema.empty()) schema = ReadSchema(f.schema);
  const DataTable data = ReadTable(f.input, schema);
  const SplitResult parts =
      SplitReal(data, SplitSpec{f.test_fraction, RandomSeed{f.seed}});
  const fs::path dir(f.out_dir);
  fs::create_directories(dir);
  WriteTable(parts.train, dir / "train.csv");
  WriteTable(parts.holdout, dir / "holdout.csv");
  WriteTable(parts.reference, dir / "reference.csv");
  out << "train=" << parts.train.rows() << " holdout=" << parts.holdout.rows()
      << " reference=" << parts.reference.rows() << "\n";
  return kExitOk;
}

int CmdReport(const ReportFlags& f, std::ostream& out) {
  const AuditReport a = AuditReport::FromJson(ReadJsonFile(f.in));
  std::string text;
  if (!f.compare.empty()) {
    const AuditReport b = AuditReport::FromJson(ReadJsonFile(f.compare));
    const ReportComparison cmp = CompareReports(a, b);
    if (f.format == "json") {
      nlohmann::ordered_json j;
      j["verdict"] = cmp.verdict;
      for (const auto& m : cmp.max_mia) {
        j["max_mia"][m.metric] = {{"a", m.a}, {"b", m.b}, {"delta", m.delta}};
      }
      j["instances"] = nlohmann::ordered_json::object();
      for (const auto& inst : cmp.instances) {
        for (const auto& m : inst.metrics) j["instances"][inst.id][m.metric] = m.delta;
      }
      text = j.dump(2) + "\n";
    } else {
      text = RenderComparison(cmp);
    }
  } else if (f.format == "json") {
    text = a.ToJson().dump(2) + "\n";
  } else {
    text = RenderMarkdown(a);
  }
  if (f.out.empty()) {
    out << text;
  } else {
    WriteText(f.out, text);
  }
  return kExitOk;
}

int CmdFixtures(const FixtureFlags& f, std::ostream& out) {
  const FixtureCase c = MakeCase(f.fixture, f.n, f.d, RandomSeed{f.seed});
  const fs::path dir(f.out_dir);
  fs::create_directories(dir);
  WriteTable(c.train, dir / "train.csv");
  WriteTable(c.holdout, dir / "holdout.csv");
  WriteTable(c.reference, dir / "reference.csv");
  WriteTable(c.synthetic, dir / "synthetic.csv");
  out << "train=" << c.train.rows() << " holdout=" << c.holdout.rows()
      << " reference=" << c.reference.rows()
      << " synthetic=" << c.synthetic.rows() << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Membership-inference privacy audits for tabular synthetic data",
               "tabaudit"};
  app.require_subcommand(1);

  AuditFlags audit;
  auto* cmd_audit = app.add_subcommand("audit", "Run the attack suite");
  cmd_audit->add_option("--train", audit.train, "Training CSV")->required();
  cmd_audit->add_option("--holdout", audit.holdout, "Holdout CSV")->required();
  cmd_audit->add_option("--synthetic", audit.synthetic, "Synthetic CSV")->required();
  cmd_audit->add_option("--reference", audit.reference,
                        "Reference CSV (enables calibrated attacks)");
  cmd_audit->add_option("--schema", audit.schema, "Schema JSON");
  cmd_audit->add_option("--attacks", audit.attacks,
                        "Comma list of families, family:key=value items, "
                        "\"all\", or a JSON file")
      ->capture_default_str();
  cmd_audit->add_option("--seed", audit.seed, "Random seed")->required();
  cmd_audit->add_option("--cap", audit.cap, "Evaluation rows per class")
      ->capture_default_str();
  cmd_audit->add_option("--fpr-targets", audit.fpr_targets,
                        "Comma list of FPR budgets")
      ->capture_default_str();
  cmd_audit->add_option("--epsilon-mode", audit.epsilon_mode, "point or cp")
      ->capture_default_str();
  cmd_audit->add_option("--delta", audit.delta, "Delta for effective epsilon")
      ->capture_default_str();
  cmd_audit->add_option("--confidence", audit.confidence,
                        "Clopper-Pearson confidence")
      ->capture_default_str();
  cmd_audit->add_option("--fit-source", audit.fit_source,
                        "Encoder fit table: synthetic or reference")
      ->capture_default_str();
  cmd_audit->add_option("--out", audit.out, "Report JSON path")->required();
  cmd_audit->add_option("--md", audit.md, "Markdown report path");
  cmd_audit->add_option("--jobs", audit.jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd_audit->add_flag("--verbose", audit.verbose, "Progress on stdout");
  cmd_audit->add_flag("--timing", audit.timing,
                      "Record wall-clock per attack (makes reports "
                      "run-dependent)");
  cmd_audit->add_flag("--dcr-prop", audit.dcr_prop,
                      "Include the DCR proportion block");

  SplitFlags split;
  auto* cmd_split = app.add_subcommand("split", "Split a table into train, "
                                                "holdout and reference");
  cmd_split->add_option("--input", split.input, "Input CSV")->required();
  cmd_split->add_option("--out-dir", split.out_dir, "Output directory")->required();
  cmd_split->add_option("--seed", split.seed, "Random seed")->required();
  cmd_split->add_option("--test-fraction", split.test_fraction,
                        "Share of rows held out")
      ->capture_default_str();
  cmd_split->add_option("--schema", split.schema, "Schema JSON");

  ReportFlags rep;
  auto* cmd_report = app.add_subcommand("report", "Render or compare reports");
  cmd_report->add_option("--in", rep.in, "Report JSON")->required();
  cmd_report->add_option("--compare", rep.compare, "Second report to diff");
  cmd_report->add_option("--format", rep.format, "md or json")
      ->check(CLI::IsMember({"md", "json"}))
      ->capture_default_str();
  cmd_report->add_option("--out", rep.out, "Output path (default stdout)");

  FixtureFlags fix;
  auto* cmd_fixtures = app.add_subcommand("fixtures", "Write toy fixture CSVs");
  cmd_fixtures->add_option("--fixture", fix.fixture,
                           "leaky, noisy-<sigma>, private, gaussian, marginal")
      ->required();
  cmd_fixtures->add_option("--n", fix.n, "Train rows")->capture_default_str();
  cmd_fixtures->add_option("--d", fix.d, "Dimensions")->capture_default_str();
  cmd_fixtures->add_option("--seed", fix.seed, "Random seed")->required();
  cmd_fixtures->add_option("--out-dir", fix.out_dir, "Output directory")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*cmd_audit) return CmdAudit(audit, out, err);
    if (*cmd_split) return CmdSplit(split, out);
    if (*cmd_report) return CmdReport(rep, out);
    if (*cmd_fixtures) return CmdFixtures(fix, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace tabaudit
