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

#ifndef TABAUDIT_CORE_H_
#define TABAUDIT_CORE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabaudit/random.h"

namespace tabaudit {

// Raised for problems with user-supplied data or configuration. The CLI maps
// it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> Row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> Row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }

  void AppendRow(std::span<const double> row);
  Matrix SelectRows(std::span<const size_t> indices) const;
  // Rows of `a` followed by rows of `b`. Column counts must agree.
  static Matrix Stack(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

double SquaredDistance(std::span<const double> a, std::span<const double> b);

enum class ColumnKind { kNumeric, kCategorical };

const char* ColumnKindName(ColumnKind kind);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Explicit vocabulary for categorical columns; its order fixes the one-hot
  // column order.
  std::optional<std::vector<std::string>> categories;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

class TableSchema {
 public:
  TableSchema() = default;
  // Throws ValidationError on empty column list, duplicate names or an empty
  // vocabulary.
  explicit TableSchema(std::vector<ColumnSpec> columns);

  size_t size() const { return columns_.size(); }
  const ColumnSpec& column(size_t i) const { return columns_[i]; }
  const std::vector<ColumnSpec>& columns() const { return columns_; }
  std::optional<size_t> IndexOf(const std::string& name) const;
  bool AllNumeric() const;

  // Names, kinds and order agree. Vocabularies are not compared.
  bool SameLayout(const TableSchema& other) const;
  // Human-readable description of the first layout difference, empty if none.
  std::string DescribeMismatch(const TableSchema& other) const;

  friend bool operator==(const TableSchema&, const TableSchema&) = default;

 private:
  std::vector<ColumnSpec> columns_;
};

// Column-oriented table. Numeric columns hold finite doubles and categorical
// columns hold text tokens; the unused vector of each column stays empty.
class DataTable {
 public:
  struct Column {
    std::vector<double> numbers;
    std::vector<std::string> tokens;
    friend bool operator==(const Column&, const Column&) = default;
  };

  DataTable() = default;
  // Validates shape, finiteness and n >= 1.
  DataTable(TableSchema schema, std::vector<Column> columns);

  const TableSchema& schema() const { return schema_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return schema_.size(); }

  double Number(size_t row, size_t col) const {
    return columns_[col].numbers[row];
  }
  const std::string& Token(size_t row, size_t col) const {
    return columns_[col].tokens[row];
  }
  const Column& column(size_t col) const { return columns_[col]; }

  // Text rendering of a cell (numeric cells at 17 significant digits).
  std::string CellText(size_t row, size_t col) const;

  DataTable SelectRows(std::span<const size_t> indices) const;
  static DataTable Concat(const DataTable& a, const DataTable& b);

  // Stable 64-bit hash of one row's cells; used for overlap detection.
  uint64_t RowHash(size_t row) const;

  friend bool operator==(const DataTable&, const DataTable&) = default;

 private:
  TableSchema schema_;
  std::vector<Column> columns_;
  size_t rows_ = 0;
};

// 17 significant digits; round-trips exactly.
std::string FormatDouble(double v);
// Shortest text that round-trips ("25", "0.001").
std::string FormatShortest(double v);

// Membership scores for one attack instance, aligned with ground truth.
class AttackResult {
 public:
  // Scores of +/-infinity are clamped to +/-1e308. Throws ValidationError when
  // sizes differ, fewer than two targets, a class is missing or a score is NaN.
  AttackResult(std::string attack_id, std::vector<double> scores,
               std::vector<int> labels,
               std::map<std::string, double> hyperparams = {},
               uint64_t seed = 0);

  const std::string& attack_id() const { return attack_id_; }
  const std::vector<double>& scores() const { return scores_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::map<std::string, double>& hyperparams() const {
    return hyperparams_;
  }
  uint64_t seed() const { return seed_; }
  size_t size() const { return scores_.size(); }
  size_t members() const { return members_; }
  size_t nonmembers() const { return scores_.size() - members_; }

 private:
  std::string attack_id_;
  std::vector<double> scores_;
  std::vector<int> labels_;
  std::map<std::string, double> hyperparams_;
  uint64_t seed_ = 0;
  size_t members_ = 0;
};

inline constexpr double kScoreClamp = 1e308;

// The four dataset roles after schema validation.
struct Quadruple {
  DataTable train;
  DataTable holdout;
  DataTable synthetic;
  std::optional<DataTable> reference;
  bool calibrated = false;
  std::vector<std::string> warnings;
};

// Throws ValidationError on schema mismatch. Train/holdout row overlap only
// produces a warning.
Quadruple ValidateQuadruple(DataTable train, DataTable holdout,
                            DataTable synthetic,
                            std::optional<DataTable> reference);

struct EvalSet {
  DataTable targets;
  std::vector<int> labels;  // 1 = member, 0 = non-member
};

// Each source is shuffled with its own child stream before capping; members
// come first.
EvalSet BuildEvalSet(const DataTable& train, const DataTable& holdout,
                     size_t cap, RandomSeed seed);

}  // namespace tabaudit

#endif  // TABAUDIT_CORE_H_
