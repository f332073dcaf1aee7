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

#ifndef TABAUDIT_PREPROCESS_H_
#define TABAUDIT_PREPROCESS_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tabaudit/core.h"

namespace tabaudit {

// onehot: min-max numerics plus indicator blocks, used by distance and
// discriminator attacks. ordinal: min-max numerics plus one scaled index per
// categorical column, used by the KDE-backed attacks.
enum class EncodingMode { kOneHot, kOrdinal };
enum class FitSource { kSynthetic, kReference };

const char* EncodingModeName(EncodingMode mode);
const char* FitSourceName(FitSource source);
FitSource ParseFitSource(const std::string& name);

struct EncodedMatrix {
  Matrix values;
  std::string transformer_id;
};

// Encoder fitted on adversary-visible data only. Immutable after Fit.
class FittedTransformer {
 public:
  struct NumericBounds {
    double min = 0.0;
    double max = 1.0;
  };
  struct ColumnEncoding {
    std::string name;
    ColumnKind kind = ColumnKind::kNumeric;
    NumericBounds bounds;
    std::vector<std::string> categories;  // index order
    size_t width = 1;
  };

  // Numeric bounds come from the data; a constant column v gets (v-0.5,
  // v+0.5). Vocabularies come from the schema when present, otherwise from
  // the observed values in first-appearance order.
  static FittedTransformer Fit(const DataTable& data, EncodingMode mode,
                               FitSource source);

  // Numerics are not clipped. Unseen categories map to an all-zero block
  // (onehot) or to 1 + 1/k (ordinal). Throws ValidationError when the table
  // layout differs from the fitting schema.
  EncodedMatrix Transform(const DataTable& data) const;

  EncodingMode mode() const { return mode_; }
  FitSource fit_source() const { return fit_source_; }
  size_t output_dim() const { return output_dim_; }
  const std::vector<ColumnEncoding>& encodings() const { return encodings_; }

  nlohmann::ordered_json ToJson() const;
  // FNV-1a of the serialized state, rendered as 16 hex digits.
  std::string Digest() const;

 private:
  FittedTransformer() = default;

  EncodingMode mode_ = EncodingMode::kOneHot;
  FitSource fit_source_ = FitSource::kSynthetic;
  TableSchema schema_;
  std::vector<ColumnEncoding> encodings_;
  std::vector<std::unordered_map<std::string, size_t>> index_;
  size_t output_dim_ = 0;
};

}  // namespace tabaudit

#endif  // TABAUDIT_PREPROCESS_H_
