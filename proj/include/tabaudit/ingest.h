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

#ifndef TABAUDIT_INGEST_H_
#define TABAUDIT_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tabaudit/core.h"

namespace tabaudit {

// RFC-4180 style records: comma separated, double-quote escaping, CRLF or LF
// line endings. Throws ValidationError on an unterminated quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// Parses CSV text with a header row. With a schema, the header must match the
// schema's column names and cells are validated against it; otherwise kinds
// are inferred (numeric iff every cell parses as a finite real) and observed
// categories are recorded in first-appearance order. Empty cells are rejected
// with their (row, column) coordinates; rows are numbered from 1 after the
// header.
DataTable ParseTable(std::string_view text,
                     const std::optional<TableSchema>& schema = std::nullopt,
                     std::string_view source = "<memory>");
DataTable ReadTable(const std::filesystem::path& path,
                    const std::optional<TableSchema>& schema = std::nullopt);

// Numeric cells are written with 17 significant digits.
void WriteTable(const DataTable& table, std::ostream& out);
void WriteTable(const DataTable& table, const std::filesystem::path& path);

nlohmann::ordered_json SchemaToJson(const TableSchema& schema);
TableSchema SchemaFromJson(const nlohmann::json& j);
TableSchema ReadSchema(const std::filesystem::path& path);

struct SplitSpec {
  double test_fraction = 0.2;
  RandomSeed seed;
};

struct SplitResult {
  DataTable train;
  DataTable holdout;
  DataTable reference;
};

// Seeded permutation; ceil(f * n) rows form the test part, which is halved
// into holdout (the larger half) and reference.
SplitResult SplitReal(const DataTable& data, const SplitSpec& spec);

// Partition sizes SplitReal produces for n rows.
struct SplitSizes {
  size_t train = 0;
  size_t holdout = 0;
  size_t reference = 0;
};
SplitSizes ComputeSplitSizes(size_t n, double test_fraction);

// Order-sensitive FNV-1a digest of schema and cells.
uint64_t Fingerprint(const DataTable& data);
std::string FingerprintHex(const DataTable& data);

}  // namespace tabaudit

#endif  // TABAUDIT_INGEST_H_
