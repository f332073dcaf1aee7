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

#ifndef TABAUDIT_DCRPROP_H_
#define TABAUDIT_DCRPROP_H_

#include <cstddef>

#include "json.hpp"
#include "tabaudit/core.h"
#include "tabaudit/preprocess.h"

namespace tabaudit {

// Non-adversarial similarity score: for each synthetic row, is its nearest
// train row closer than its nearest reference row?
struct DcrPropResult {
  size_t closer_to_train = 0;
  size_t closer_to_reference = 0;
  size_t ties = 0;

  size_t total() const { return closer_to_train + closer_to_reference + ties; }
  // (closer_to_reference + ties / 2) / |S|: 0.5 is balanced, lower means the
  // synthetic rows sit nearer the training data.
  double proportion() const;
  // 1 - proportion(): the share credited to the training side.
  double proportion_closer_to_train() const;

  nlohmann::ordered_json ToJson() const;
};

// Distances are measured after encoding all three tables with `transformer`.
DcrPropResult DcrProp(const DataTable& train, const DataTable& reference,
                      const DataTable& synthetic,
                      const FittedTransformer& transformer);

}  // namespace tabaudit

#endif  // TABAUDIT_DCRPROP_H_
