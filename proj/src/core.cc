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

#include "tabaudit/core.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_set>

namespace tabaudit {

void Matrix::AppendRow(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) {
    throw std::invalid_argument("Matrix::AppendRow: width mismatch");
  }
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix Matrix::SelectRows(std::span<const size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (size_t i = 0; i < indices.size(); ++i) {
    auto src = Row(indices[i]);
    std::copy(src.begin(), src.end(), out.Row(i).begin());
  }
  return out;
}

Matrix Matrix::Stack(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.cols_) {
    throw std::invalid_argument("Matrix::Stack: column count mismatch");
  }
  Matrix out = a;
  out.data_.insert(out.data_.end(), b.data_.begin(), b.data_.end());
  out.rows_ += b.rows_;
  return out;
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

const char* ColumnKindName(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

TableSchema::TableSchema(std::vector<ColumnSpec> columns)
    : columns_(std::move(columns)) {
  if (columns_.empty()) throw ValidationError("schema has no columns");
  std::set<std::string> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(c.name).second) {
      throw ValidationError("duplicate column name \"" + c.name + "\"");
    }
    if (c.categories) {
      if (c.kind != ColumnKind::kCategorical) {
        throw ValidationError("numeric column \"" + c.name +
                              "\" cannot carry categories");
      }
      std::set<std::string> distinct(c.categories->begin(),
                                     c.categories->end());
      if (distinct.empty()) {
        throw ValidationError("column \"" + c.name + "\" has an empty vocabulary");
      }
      if (distinct.size() != c.categories->size()) {
        throw ValidationError("column \"" + c.name +
                              "\" has duplicate categories");
      }
    }
  }
}

std::optional<size_t> TableSchema::IndexOf(const std::string& name) const {
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

bool TableSchema::AllNumeric() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const ColumnSpec& c) {
    return c.kind == ColumnKind::kNumeric;
  });
}

bool TableSchema::SameLayout(const TableSchema& other) const {
  return DescribeMismatch(other).empty();
}

std::string TableSchema::DescribeMismatch(const TableSchema& other) const {
  if (columns_.size() != other.columns_.size()) {
    return "column count " + std::to_string(columns_.size()) + " vs " +
           std::to_string(other.columns_.size());
  }
  for (size_t i = 0; i < columns_.size(); ++i) {
    const auto& a = columns_[i];
    const auto& b = other.columns_[i];
    if (a.name != b.name) {
      return "column " + std::to_string(i) + " named \"" + a.name +
             "\" vs \"" + b.name + "\"";
    }
    if (a.kind != b.kind) {
      return "column \"" + a.name + "\" is " + ColumnKindName(a.kind) +
             " vs " + ColumnKindName(b.kind);
    }
  }
  return {};
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string FormatShortest(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<int64_t>(v));
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

DataTable::DataTable(TableSchema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.size()) {
    throw ValidationError("table has " + std::to_string(columns_.size()) +
                          " columns, schema has " +
                          std::to_string(schema_.size()));
  }
  if (columns_.empty()) throw ValidationError("table has no columns");
  for (size_t c = 0; c < columns_.size(); ++c) {
    const auto& spec = schema_.column(c);
    const auto& col = columns_[c];
    const size_t n = spec.kind == ColumnKind::kNumeric ? col.numbers.size()
                                                        : col.tokens.size();
    if (c == 0) rows_ = n;
    if (n != rows_) {
      throw ValidationError("column \"" + spec.name + "\" has " +
                            std::to_string(n) + " rows, expected " +
                            std::to_string(rows_));
    }
    if (spec.kind == ColumnKind::kNumeric) {
      for (size_t r = 0; r < n; ++r) {
        if (!std::isfinite(col.numbers[r])) {
          throw ValidationError("non-finite value at row " +
                                std::to_string(r + 1) + ", column \"" +
                                spec.name + "\"");
        }
      }
    }
  }
  if (rows_ == 0) throw ValidationError("table has no rows");
}

std::string DataTable::CellText(size_t row, size_t col) const {
  if (schema_.column(col).kind == ColumnKind::kNumeric) {
    return FormatDouble(Number(row, col));
  }
  return Token(row, col);
}

DataTable DataTable::SelectRows(std::span<const size_t> indices) const {
  std::vector<Column> out(columns_.size());
  for (size_t c = 0; c < columns_.size(); ++c) {
    const bool numeric = schema_.column(c).kind == ColumnKind::kNumeric;
    for (size_t idx : indices) {
      if (numeric) {
        out[c].numbers.push_back(columns_[c].numbers.at(idx));
      } else {
        out[c].tokens.push_back(columns_[c].tokens.at(idx));
      }
    }
  }
  return DataTable(schema_, std::move(out));
}

DataTable DataTable::Concat(const DataTable& a, const DataTable& b) {
  if (!a.schema_.SameLayout(b.schema_)) {
    throw ValidationError("cannot concatenate tables: " +
                          a.schema_.DescribeMismatch(b.schema_));
  }
  std::vector<Column> out = a.columns_;
  for (size_t c = 0; c < out.size(); ++c) {
    const auto& src = b.columns_[c];
    out[c].numbers.insert(out[c].numbers.end(), src.numbers.begin(),
                          src.numbers.end());
    out[c].tokens.insert(out[c].tokens.end(), src.tokens.begin(),
                         src.tokens.end());
  }
  return DataTable(a.schema_, std::move(out));
}

uint64_t DataTable::RowHash(size_t row) const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  for (size_t c = 0; c < cols(); ++c) feed(CellText(row, c));
  return h;
}

AttackResult::AttackResult(std::string attack_id, std::vector<double> scores,
                           std::vector<int> labels,
                           std::map<std::string, double> hyperparams,
                           uint64_t seed)
    : attack_id_(std::move(attack_id)),
      scores_(std::move(scores)),
      labels_(std::move(labels)),
      hyperparams_(std::move(hyperparams)),
      seed_(seed) {
  if (scores_.size() != labels_.size()) {
    throw ValidationError("attack " + attack_id_ + ": " +
                          std::to_string(scores_.size()) + " scores but " +
                          std::to_string(labels_.size()) + " labels");
  }
  if (scores_.size() < 2) {
    throw ValidationError("attack " + attack_id_ + ": fewer than two targets");
  }
  for (size_t i = 0; i < scores_.size(); ++i) {
    if (labels_[i] != 0 && labels_[i] != 1) {
      throw ValidationError("labels must be 0 or 1");
    }
    members_ += static_cast<size_t>(labels_[i]);
    double& s = scores_[i];
    if (std::isnan(s)) {
      throw ValidationError("attack " + attack_id_ + ": NaN score at target " +
                            std::to_string(i));
    }
    s = std::clamp(s, -kScoreClamp, kScoreClamp);
  }
  if (members_ == 0 || members_ == scores_.size()) {
    throw ValidationError("attack " + attack_id_ +
                          ": labels must contain both classes");
  }
}

Quadruple ValidateQuadruple(DataTable train, DataTable holdout,
                            DataTable synthetic,
                            std::optional<DataTable> reference) {
  const auto check = [&train](const DataTable& t, const char* role) {
    if (t.rows() == 0) {
      throw ValidationError(std::string(role) + " table is empty");
    }
    const std::string diff = train.schema().DescribeMismatch(t.schema());
    if (!diff.empty()) {
      throw ValidationError(std::string("schema mismatch between train and ") +
                            role + ": " + diff);
    }
  };
  check(train, "train");
  check(holdout, "holdout");
  check(synthetic, "synthetic");
  if (reference) check(*reference, "reference");

  Quadruple q;
  std::unordered_set<uint64_t> train_rows;
  for (size_t r = 0; r < train.rows(); ++r) train_rows.insert(train.RowHash(r));
  size_t overlap = 0;
  for (size_t r = 0; r < holdout.rows(); ++r) {
    overlap += train_rows.count(holdout.RowHash(r));
  }
  if (overlap > 0) {
    q.warnings.push_back(std::to_string(overlap) +
                         " holdout row(s) also appear in train");
  }
  q.calibrated = reference.has_value();
  q.train = std::move(train);
  q.holdout = std::move(holdout);
  q.synthetic = std::move(synthetic);
  q.reference = std::move(reference);
  return q;
}

EvalSet BuildEvalSet(const DataTable& train, const DataTable& holdout,
                     size_t cap, RandomSeed seed) {
  if (cap == 0) throw std::invalid_argument("evaluation cap must be >= 1");
  if (train.rows() == 0 || holdout.rows() == 0) {
    throw ValidationError("evaluation set needs both train and holdout rows");
  }
  const auto take = [cap](const DataTable& t, RandomSeed s) {
    Rng rng(s);
    std::vector<size_t> order = rng.Permutation(t.rows());
    order.resize(std::min(cap, t.rows()));
    return t.SelectRows(order);
  };
  DataTable members = take(train, seed.Child("eval/train"));
  DataTable nonmembers = take(holdout, seed.Child("eval/holdout"));
  EvalSet out;
  out.labels.assign(members.rows(), 1);
  out.labels.resize(members.rows() + nonmembers.rows(), 0);
  out.targets = DataTable::Concat(members, nonmembers);
  return out;
}

}  // namespace tabaudit
