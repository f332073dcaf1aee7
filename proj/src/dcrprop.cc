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

#include "tabaudit/dcrprop.h"

#include "tabaudit/neighbors.h"

namespace tabaudit {

double DcrPropResult::proportion() const {
  return (static_cast<double>(closer_to_reference) +
          0.5 * static_cast<double>(ties)) /
         static_cast<double>(total());
}

double DcrPropResult::proportion_closer_to_train() const {
  return 1.0 - proportion();
}

nlohmann::ordered_json DcrPropResult::ToJson() const {
  nlohmann::ordered_json j;
  j["proportion_closer_to_reference"] = proportion();
  j["proportion_closer_to_train"] = proportion_closer_to_train();
  j["n_closer_to_train"] = closer_to_train;
  j["n_closer_to_reference"] = closer_to_reference;
  j["n_ties"] = ties;
  j["tie_rule"] = "half credit to each side";
  return j;
}

DcrPropResult DcrProp(const DataTable& train, const DataTable& reference,
                      const DataTable& synthetic,
                      const FittedTransformer& transformer) {
  if (train.rows() == 0 || reference.rows() == 0 || synthetic.rows() == 0) {
    throw ValidationError("dcr_prop needs non-empty train, reference and "
                          "synthetic tables");
  }
  const NeighborIndex train_index(transformer.Transform(train).values);
  const NeighborIndex reference_index(transformer.Transform(reference).values);
  const Matrix s = transformer.Transform(synthetic).values;
  DcrPropResult out;
  for (size_t i = 0; i < s.rows(); ++i) {
    const double to_train = train_index.NearestDistance(s.Row(i));
    const double to_reference = reference_index.NearestDistance(s.Row(i));
    if (to_train < to_reference) {
      ++out.closer_to_train;
    } else if (to_reference < to_train) {
      ++out.closer_to_reference;
    } else {
      ++out.ties;
    }
  }
  return out;
}

}  // namespace tabaudit
