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

#ifndef TABAUDIT_DISCRIMINATOR_H_
#define TABAUDIT_DISCRIMINATOR_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tabaudit/core.h"

namespace tabaudit {

enum class DiscriminatorKind { kMlp, kForest };

struct MlpConfig {
  size_t hidden = 256;
  double learning_rate = 1e-3;
  size_t batch_size = 256;
  size_t epochs = 200;
};

struct ForestConfig {
  size_t trees = 100;
  size_t max_depth = 8;
  // Features tried per split; 0 selects floor(sqrt(m)), at least 1.
  size_t max_features = 0;
};

struct DiscriminatorConfig {
  MlpConfig mlp;
  ForestConfig forest;
};

// Binary classifier separating a positive table from a negative one.
class Discriminator {
 public:
  virtual ~Discriminator() = default;

  virtual DiscriminatorKind kind() const = 0;
  virtual size_t input_dim() const = 0;
  // Probability that `query` belongs to the positive class, in [0, 1].
  // Throws std::invalid_argument on dimension mismatch.
  virtual double Score(std::span<const double> query) const = 0;

  std::vector<double> ScoreRows(const Matrix& queries) const;
};

// One hidden ReLU layer and a sigmoid output, trained with Adam on binary
// cross-entropy. Parameters are stored flat as [W1 (hidden x m), b1, w2, b2].
class Mlp final : public Discriminator {
 public:
  Mlp(size_t input_dim, size_t hidden, RandomSeed seed);

  static Mlp Train(const Matrix& positives, const Matrix& negatives,
                   const MlpConfig& config, RandomSeed seed);

  DiscriminatorKind kind() const override { return DiscriminatorKind::kMlp; }
  size_t input_dim() const override { return input_dim_; }
  size_t hidden() const { return hidden_; }
  double Score(std::span<const double> query) const override;
  double Logit(std::span<const double> query) const;

  // Mean binary cross-entropy over the rows of `x` and its gradient with
  // respect to the flat parameter vector.
  double LossAndGradient(const Matrix& x, std::span<const int> labels,
                         std::vector<double>* gradient) const;

  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

 private:
  size_t input_dim_;
  size_t hidden_;
  std::vector<double> params_;
};

// Bagged CART trees with Gini splits and per-split feature subsampling; a
// leaf scores the positive fraction of its bootstrap samples.
class Forest final : public Discriminator {
 public:
  static Forest Train(const Matrix& positives, const Matrix& negatives,
                      const ForestConfig& config, RandomSeed seed);

  DiscriminatorKind kind() const override { return DiscriminatorKind::kForest; }
  size_t input_dim() const override { return input_dim_; }
  double Score(std::span<const double> query) const override;
  size_t tree_count() const { return trees_.size(); }

 private:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  using Tree = std::vector<Node>;

  size_t input_dim_ = 0;
  std::vector<Tree> trees_;
};

// Throws ValidationError when either class has fewer than two rows.
std::unique_ptr<Discriminator> TrainDiscriminator(
    DiscriminatorKind kind, const Matrix& positives, const Matrix& negatives,
    const DiscriminatorConfig& config, RandomSeed seed);

}  // namespace tabaudit

#endif  // TABAUDIT_DISCRIMINATOR_H_
