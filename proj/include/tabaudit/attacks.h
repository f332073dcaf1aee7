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

#ifndef TABAUDIT_ATTACKS_H_
#define TABAUDIT_ATTACKS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabaudit/core.h"
#include "tabaudit/discriminator.h"
#include "tabaudit/preprocess.h"

namespace tabaudit {

enum class AttackFamily {
  kDcr,
  kDcrDiff,
  kDensity,
  kDomias,
  kDpi,
  kGenLra,
  kLocalNeighborhood,
  kLogan,
  kClassifier,
  kMc,
};

const std::vector<AttackFamily>& AllFamilies();
const char* FamilyName(AttackFamily family);
// Throws ValidationError for an unknown name.
AttackFamily ParseFamily(const std::string& name);

// Calibrated families read the reference table; no-box families never do.
bool RequiresReference(AttackFamily family);
// KDE-backed families use the ordinal encoding, all others onehot.
EncodingMode EncodingFor(AttackFamily family);

// One attack instance: a family plus hyperparameters. Keys in use:
//   dpi, gen_lra          k (neighbors)
//   gen_lra               refit_bandwidth (1 = refit on R plus target, 0 = reuse)
//   local_neighborhood    radius
//   logan                 epochs, hidden, learning_rate, batch_size
//   classifier            trees, max_depth
struct AttackSpec {
  AttackFamily family = AttackFamily::kDcr;
  std::map<std::string, double> hyperparams;

  // "dpi[k=25]"; just the family name when there are no hyperparameters.
  std::string Id() const;
  bool requires_reference() const { return RequiresReference(family); }
  EncodingMode encoding() const { return EncodingFor(family); }

  // Hyperparameters with family defaults filled in.
  std::map<std::string, double> Resolved() const;

  // {"family":"dpi","k":25}
  nlohmann::ordered_json ToJson() const;
  static AttackSpec FromJson(const nlohmann::ordered_json& j);
  // "dpi", "dpi:k=25" or "local_neighborhood:radius=0.5".
  static AttackSpec Parse(const std::string& text);

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

// Per-target scores; higher means more member-like. `targets`, `synthetic`
// and `reference` are encoded matrices of equal width.
std::vector<double> DcrScores(const Matrix& targets, const Matrix& synthetic);
std::vector<double> DcrDiffScores(const Matrix& targets, const Matrix& synthetic,
                                  const Matrix& reference);
std::vector<double> DensityScores(const Matrix& targets, const Matrix& synthetic);
std::vector<double> DomiasScores(const Matrix& targets, const Matrix& synthetic,
                                 const Matrix& reference);
std::vector<double> DpiScores(const Matrix& targets, const Matrix& synthetic,
                              const Matrix& reference, size_t k);
std::vector<double> GenLraScores(const Matrix& targets, const Matrix& synthetic,
                                 const Matrix& reference, size_t k,
                                 bool refit_bandwidth = true);
std::vector<double> LocalNeighborhoodScores(const Matrix& targets,
                                            const Matrix& synthetic,
                                            double radius);
std::vector<double> LoganScores(const Matrix& targets, const Matrix& synthetic,
                                const Matrix& reference, const MlpConfig& config,
                                RandomSeed seed);
std::vector<double> ClassifierScores(const Matrix& targets,
                                     const Matrix& synthetic,
                                     const Matrix& reference,
                                     const ForestConfig& config,
                                     RandomSeed seed);
std::vector<double> McScores(const Matrix& targets, const Matrix& synthetic);

// Median distance from each synthetic row to its nearest other synthetic
// row, floored at 1e-6.
double McRadius(const Matrix& synthetic);

// Targets, synthetic and reference rows under one encoding.
struct EncodedViews {
  Matrix targets;
  Matrix synthetic;
  std::optional<Matrix> reference;
};

// Everything an attack reads, encoded once per audit.
struct AttackInputs {
  EncodedViews onehot;
  EncodedViews ordinal;
  std::vector<int> labels;

  bool calibrated() const { return onehot.reference.has_value(); }
  const EncodedViews& views(EncodingMode mode) const {
    return mode == EncodingMode::kOneHot ? onehot : ordinal;
  }
};

struct TransformerPair {
  FittedTransformer onehot;
  FittedTransformer ordinal;
};

// Fits both encoders on the chosen adversary-visible table. Throws
// ValidationError when the source is the reference table and it is absent.
TransformerPair FitTransformers(const Quadruple& quadruple, FitSource source);

AttackInputs EncodeInputs(const Quadruple& quadruple, const EvalSet& eval,
                          const TransformerPair& transformers);

// Dispatches to the family's scoring function. Throws ValidationError when a
// calibrated spec has no reference table or hyperparameters are invalid.
AttackResult RunAttack(const AttackSpec& spec, const AttackInputs& inputs,
                       RandomSeed seed);

}  // namespace tabaudit

#endif  // TABAUDIT_ATTACKS_H_
