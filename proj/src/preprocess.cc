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

#include "tabaudit/preprocess.h"

#include <algorithm>
#include <cstdio>

namespace tabaudit {

const char* EncodingModeName(EncodingMode mode) {
  return mode == EncodingMode::kOneHot ? "onehot" : "ordinal";
}

const char* FitSourceName(FitSource source) {
  return source == FitSource::kSynthetic ? "synthetic" : "reference";
}

FitSource ParseFitSource(const std::string& name) {
  if (name == "synthetic") return FitSource::kSynthetic;
  if (name == "reference") return FitSource::kReference;
  throw ValidationError("unknown encoder fit source \"" + name + "\"");
}

FittedTransformer FittedTransformer::Fit(const DataTable& data,
                                         EncodingMode mode, FitSource source) {
  if (data.rows() == 0) {
    throw ValidationError("cannot fit a transformer on an empty table");
  }
  FittedTransformer t;
  t.mode_ = mode;
  t.fit_source_ = source;
  t.schema_ = data.schema();
  for (size_t c = 0; c < data.cols(); ++c) {
    const ColumnSpec& spec = data.schema().column(c);
    ColumnEncoding enc;
    enc.name = spec.name;
    enc.kind = spec.kind;
    std::unordered_map<std::string, size_t> index;
    if (spec.kind == ColumnKind::kNumeric) {
      const auto& v = data.column(c).numbers;
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      enc.bounds = {*lo, *hi};
      if (*lo == *hi) enc.bounds = {*lo - 0.5, *hi + 0.5};
      enc.width = 1;
    } else {
      if (spec.categories) {
        enc.categories = *spec.categories;
      } else {
        for (const auto& tok : data.column(c).tokens) {
          if (!index.count(tok)) {
            index.emplace(tok, enc.categories.size());
            enc.categories.push_back(tok);
          }
        }
      }
      index.clear();
      for (size_t i = 0; i < enc.categories.size(); ++i) {
        index.emplace(enc.categories[i], i);
      }
      enc.width = mode == EncodingMode::kOneHot ? enc.categories.size() : 1;
    }
    t.output_dim_ += enc.width;
    t.encodings_.push_back(std::move(enc));
    t.index_.push_back(std::move(index));
  }
  return t;
}

EncodedMatrix FittedTransformer::Transform(const DataTable& data) const {
  const std::string diff = schema_.DescribeMismatch(data.schema());
  if (!diff.empty()) {
    throw ValidationError("transform: table does not match the fitting schema: " +
                          diff);
  }
  EncodedMatrix out{Matrix(data.rows(), output_dim_), Digest()};
  size_t offset = 0;
  for (size_t c = 0; c < encodings_.size(); ++c) {
    const ColumnEncoding& enc = encodings_[c];
    if (enc.kind == ColumnKind::kNumeric) {
      const double span = enc.bounds.max - enc.bounds.min;
      for (size_t r = 0; r < data.rows(); ++r) {
        out.values(r, offset) = (data.Number(r, c) - enc.bounds.min) / span;
      }
    } else {
      const size_t k = enc.categories.size();
      for (size_t r = 0; r < data.rows(); ++r) {
        const auto it = index_[c].find(data.Token(r, c));
        if (mode_ == EncodingMode::kOneHot) {
          if (it != index_[c].end()) out.values(r, offset + it->second) = 1.0;
        } else if (it == index_[c].end()) {
          out.values(r, offset) = 1.0 + 1.0 / static_cast<double>(k);
        } else if (k == 1) {
          out.values(r, offset) = 0.5;
        } else {
          out.values(r, offset) =
              static_cast<double>(it->second) / static_cast<double>(k - 1);
        }
      }
    }
    offset += enc.width;
  }
  return out;
}

nlohmann::ordered_json FittedTransformer::ToJson() const {
  nlohmann::ordered_json j;
  j["mode"] = EncodingModeName(mode_);
  j["fit_source"] = FitSourceName(fit_source_);
  j["output_dim"] = output_dim_;
  nlohmann::ordered_json cols = nlohmann::ordered_json::array();
  for (const auto& enc : encodings_) {
    nlohmann::ordered_json jc;
    jc["name"] = enc.name;
    jc["kind"] = ColumnKindName(enc.kind);
    if (enc.kind == ColumnKind::kNumeric) {
      jc["min"] = enc.bounds.min;
      jc["max"] = enc.bounds.max;
    } else {
      jc["categories"] = enc.categories;
    }
    cols.push_back(std::move(jc));
  }
  j["columns"] = std::move(cols);
  return j;
}

std::string FittedTransformer::Digest() const {
  const std::string state = ToJson().dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : state) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tabaudit
