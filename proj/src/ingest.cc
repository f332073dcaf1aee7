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

#include "tabaudit/ingest.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace tabaudit {
namespace {

bool ParseFiniteReal(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size() || errno == ERANGE || !std::isfinite(v)) {
    return false;
  }
  *out = v;
  return true;
}

bool NeedsQuoting(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == ' ' || s.back() == ' ') return true;
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

void WriteField(std::ostream& out, const std::string& s) {
  if (!NeedsQuoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

class Fnv64 {
 public:
  void Feed(std::string_view s) {
    for (unsigned char c : s) Byte(c);
    Byte(0x1f);  // unit separator keeps ("ab","c") != ("a","bc")
  }
  void Byte(unsigned char c) {
    h_ ^= c;
    h_ *= 0x100000001b3ULL;
  }
  uint64_t value() const { return h_; }

 private:
  uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t line = 1;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    // A blank line is not a record.
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };

  // Skip a UTF-8 byte order mark.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          field.push_back(c);  // stray quote inside an unquoted field
        } else {
          in_quotes = true;
          field_started = true;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw ValidationError("unterminated quoted field near line " +
                          std::to_string(line));
  }
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

DataTable ParseTable(std::string_view text,
                     const std::optional<TableSchema>& schema,
                     std::string_view source) {
  const std::string where(source);
  auto records = ParseCsv(text);
  if (records.empty()) throw ValidationError(where + ": empty file");
  const auto& header = records[0];
  const size_t d = header.size();
  const size_t n = records.size() - 1;
  if (n == 0) throw ValidationError(where + ": no data rows");

  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != d) {
      throw ValidationError(where + ": row " + std::to_string(r) + " has " +
                            std::to_string(records[r].size()) +
                            " fields, header has " + std::to_string(d));
    }
    for (size_t c = 0; c < d; ++c) {
      if (records[r][c].empty()) {
        throw ValidationError(where + ": missing value at row " +
                              std::to_string(r) + ", column \"" + header[c] +
                              "\"");
      }
    }
  }

  std::vector<ColumnSpec> specs;
  if (schema) {
    if (schema->size() != d) {
      throw ValidationError(where + ": header has " + std::to_string(d) +
                            " columns, schema has " +
                            std::to_string(schema->size()));
    }
    for (size_t c = 0; c < d; ++c) {
      if (schema->column(c).name != header[c]) {
        throw ValidationError(where + ": header column " + std::to_string(c) +
                              " is \"" + header[c] + "\", schema expects \"" +
                              schema->column(c).name + "\"");
      }
    }
    specs = schema->columns();
  } else {
    for (size_t c = 0; c < d; ++c) {
      ColumnSpec spec{header[c], ColumnKind::kNumeric, std::nullopt};
      double unused;
      for (size_t r = 1; r < records.size(); ++r) {
        if (!ParseFiniteReal(records[r][c], &unused)) {
          spec.kind = ColumnKind::kCategorical;
          break;
        }
      }
      if (spec.kind == ColumnKind::kCategorical) {
        std::vector<std::string> vocab;
        std::unordered_set<std::string> seen;
        for (size_t r = 1; r < records.size(); ++r) {
          if (seen.insert(records[r][c]).second) vocab.push_back(records[r][c]);
        }
        spec.categories = std::move(vocab);
      }
      specs.push_back(std::move(spec));
    }
  }

  std::vector<DataTable::Column> columns(d);
  for (size_t c = 0; c < d; ++c) {
    const auto& spec = specs[c];
    std::unordered_set<std::string> vocab;
    if (spec.categories) vocab.insert(spec.categories->begin(),
                                      spec.categories->end());
    for (size_t r = 1; r < records.size(); ++r) {
      auto& cell = records[r][c];
      if (spec.kind == ColumnKind::kNumeric) {
        double v;
        if (!ParseFiniteReal(cell, &v)) {
          throw ValidationError(where + ": unparsable numeric value \"" + cell +
                                "\" at row " + std::to_string(r) +
                                ", column \"" + spec.name + "\"");
        }
        columns[c].numbers.push_back(v);
      } else {
        if (schema && spec.categories && !vocab.count(cell)) {
          throw ValidationError(where + ": category \"" + cell +
                                "\" at row " + std::to_string(r) +
                                ", column \"" + spec.name +
                                "\" is not in the schema vocabulary");
        }
        columns[c].tokens.push_back(std::move(cell));
      }
    }
  }
  return DataTable(TableSchema(std::move(specs)), std::move(columns));
}

DataTable ReadTable(const std::filesystem::path& path,
                    const std::optional<TableSchema>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseTable(buf.str(), schema, path.string());
}

void WriteTable(const DataTable& table, std::ostream& out) {
  for (size_t c = 0; c < table.cols(); ++c) {
    if (c) out << ',';
    WriteField(out, table.schema().column(c).name);
  }
  out << '\n';
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t c = 0; c < table.cols(); ++c) {
      if (c) out << ',';
      WriteField(out, table.CellText(r, c));
    }
    out << '\n';
  }
}

void WriteTable(const DataTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string() + ": cannot write file");
  WriteTable(table, out);
}

nlohmann::ordered_json SchemaToJson(const TableSchema& schema) {
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& c : schema.columns()) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["kind"] = ColumnKindName(c.kind);
    if (c.categories) jc["categories"] = *c.categories;
    cols.push_back(std::move(jc));
  }
  nlohmann::ordered_json j;
  j["columns"] = std::move(cols);
  return j;
}

TableSchema SchemaFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array()) {
    throw ValidationError("schema JSON must be an object with a \"columns\" array");
  }
  std::vector<ColumnSpec> specs;
  for (const auto& jc : j["columns"]) {
    if (!jc.contains("name") || !jc["name"].is_string() ||
        !jc.contains("kind") || !jc["kind"].is_string()) {
      throw ValidationError("schema column needs string \"name\" and \"kind\"");
    }
    ColumnSpec spec;
    spec.name = jc["name"].get<std::string>();
    const auto kind = jc["kind"].get<std::string>();
    if (kind == "numeric") {
      spec.kind = ColumnKind::kNumeric;
    } else if (kind == "categorical") {
      spec.kind = ColumnKind::kCategorical;
    } else {
      throw ValidationError("column \"" + spec.name + "\": unknown kind \"" +
                            kind + "\"");
    }
    if (jc.contains("categories")) {
      spec.categories = jc["categories"].get<std::vector<std::string>>();
    }
    specs.push_back(std::move(spec));
  }
  return TableSchema(std::move(specs));
}

TableSchema ReadSchema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open schema file");
  try {
    return SchemaFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

SplitSizes ComputeSplitSizes(size_t n, double test_fraction) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test fraction must lie in (0, 1)");
  }
  // The small slack absorbs representation error such as 0.2 * 100.
  const auto test = static_cast<size_t>(
      std::ceil(test_fraction * static_cast<double>(n) - 1e-9));
  SplitSizes s;
  s.train = n - std::min(test, n);
  s.holdout = (test + 1) / 2;
  s.reference = test / 2;
  return s;
}

SplitResult SplitReal(const DataTable& data, const SplitSpec& spec) {
  const size_t n = data.rows();
  const SplitSizes sizes = ComputeSplitSizes(n, spec.test_fraction);
  if (n < 10 || sizes.train == 0 || sizes.holdout == 0 ||
      sizes.reference == 0) {
    throw ValidationError("cannot split " + std::to_string(n) +
                          " rows into non-empty train/holdout/reference "
                          "(need at least 10 rows)");
  }
  Rng rng(spec.seed.Child("split"));
  const std::vector<size_t> perm = rng.Permutation(n);
  const auto slice = [&perm](size_t from, size_t count) {
    return std::vector<size_t>(perm.begin() + from,
                               perm.begin() + from + count);
  };
  const auto train_idx = slice(0, sizes.train);
  const auto holdout_idx = slice(sizes.train, sizes.holdout);
  const auto reference_idx = slice(sizes.train + sizes.holdout, sizes.reference);
  return SplitResult{data.SelectRows(train_idx), data.SelectRows(holdout_idx),
                     data.SelectRows(reference_idx)};
}

uint64_t Fingerprint(const DataTable& data) {
  Fnv64 h;
  for (const auto& c : data.schema().columns()) {
    h.Feed(c.name);
    h.Feed(ColumnKindName(c.kind));
    if (c.categories) {
      for (const auto& v : *c.categories) h.Feed(v);
    }
    h.Byte(0x1e);
  }
  h.Byte(0x1d);
  for (size_t r = 0; r < data.rows(); ++r) {
    for (size_t c = 0; c < data.cols(); ++c) h.Feed(data.CellText(r, c));
    h.Byte(0x1e);
  }
  return h.value();
}

std::string FingerprintHex(const DataTable& data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fingerprint(data)));
  return buf;
}

}  // namespace tabaudit
