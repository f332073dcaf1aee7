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

#include "tabaudit/discriminator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tabaudit {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log p + (1-y) log(1-p)] with p = sigmoid(logit), without forming p.
double BinaryCrossEntropy(double logit, int label) {
  const double softplus = std::max(logit, 0.0) + std::log1p(std::exp(-std::abs(logit)));
  return softplus - (label ? logit : 0.0);
}

void CheckDim(size_t expected, size_t got) {
  if (expected != got) {
    throw std::invalid_argument("discriminator query has dimension " +
                                std::to_string(got) + ", model expects " +
                                std::to_string(expected));
  }
}

struct Dataset {
  Matrix x;
  std::vector<int> y;
};

Dataset Combine(const Matrix& positives, const Matrix& negatives) {
  Dataset d{Matrix::Stack(positives, negatives), {}};
  d.y.assign(positives.rows(), 1);
  d.y.resize(positives.rows() + negatives.rows(), 0);
  return d;
}

// Gradient of the summed loss over `rows`; returns the summed loss.
double AccumulateMlp(const std::vector<double>& params, size_t m, size_t h,
                     const Matrix& x, std::span<const int> labels,
                     std::span<const size_t> rows, std::vector<double>& grad,
                     std::vector<double>& z) {
  const double* w1 = params.data();
  const double* b1 = w1 + h * m;
  const double* w2 = b1 + h;
  const double b2 = w2[h];
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + h * m;
  double* g_w2 = g_b1 + h;
  double* g_b2 = g_w2 + h;
  double loss = 0.0;
  for (size_t row : rows) {
    const auto xi = x.Row(row);
    double logit = b2;
    for (size_t j = 0; j < h; ++j) {
      const double* wj = w1 + j * m;
      double s = b1[j];
      for (size_t c = 0; c < m; ++c) s += wj[c] * xi[c];
      z[j] = s;
      if (s > 0) logit += w2[j] * s;
    }
    loss += BinaryCrossEntropy(logit, labels[row]);
    const double dlogit = Sigmoid(logit) - static_cast<double>(labels[row]);
    *g_b2 += dlogit;
    for (size_t j = 0; j < h; ++j) {
      if (z[j] <= 0) continue;
      g_w2[j] += dlogit * z[j];
      const double dz = dlogit * w2[j];
      g_b1[j] += dz;
      double* gj = g_w1 + j * m;
      for (size_t c = 0; c < m; ++c) gj[c] += dz * xi[c];
    }
  }
  return loss;
}

}  // namespace

std::vector<double> Discriminator::ScoreRows(const Matrix& queries) const {
  std::vector<double> out(queries.rows());
  for (size_t i = 0; i < queries.rows(); ++i) out[i] = Score(queries.Row(i));
  return out;
}

Mlp::Mlp(size_t input_dim, size_t hidden, RandomSeed seed)
    : input_dim_(input_dim), hidden_(hidden) {
  if (input_dim == 0 || hidden == 0) {
    throw std::invalid_argument("MLP needs positive input and hidden sizes");
  }
  params_.resize(hidden * input_dim + 2 * hidden + 1);
  Rng rng(seed.Child("mlp/init"));
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double out_bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  const size_t first_layer = hidden * input_dim + hidden;
  for (size_t i = 0; i < params_.size(); ++i) {
    const double b = i < first_layer ? in_bound : out_bound;
    params_[i] = rng.Uniform(-b, b);
  }
}

double Mlp::Logit(std::span<const double> query) const {
  CheckDim(input_dim_, query.size());
  const size_t m = input_dim_;
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * m;
  const double* w2 = b1 + hidden_;
  double logit = w2[hidden_];
  for (size_t j = 0; j < hidden_; ++j) {
    double s = b1[j];
    for (size_t c = 0; c < m; ++c) s += w1[j * m + c] * query[c];
    if (s > 0) logit += w2[j] * s;
  }
  return logit;
}

double Mlp::Score(std::span<const double> query) const {
  return Sigmoid(Logit(query));
}

double Mlp::LossAndGradient(const Matrix& x, std::span<const int> labels,
                            std::vector<double>* gradient) const {
  CheckDim(input_dim_, x.cols());
  if (labels.size() != x.rows() || x.rows() == 0) {
    throw std::invalid_argument("MLP loss: label count mismatch");
  }
  std::vector<size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  std::vector<double> grad(params_.size(), 0.0);
  std::vector<double> z(hidden_);
  const double n = static_cast<double>(x.rows());
  const double loss =
      AccumulateMlp(params_, input_dim_, hidden_, x, labels, rows, grad, z) / n;
  if (gradient) {
    for (double& g : grad) g /= n;
    *gradient = std::move(grad);
  }
  return loss;
}

Mlp Mlp::Train(const Matrix& positives, const Matrix& negatives,
               const MlpConfig& config, RandomSeed seed) {
  const Dataset data = Combine(positives, negatives);
  Mlp net(data.x.cols(), config.hidden, seed);
  const size_t n = data.x.rows();
  const size_t p = net.params_.size();
  const size_t batch = std::max<size_t>(1, config.batch_size);

  // Adam with the usual defaults.
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  std::vector<double> first(p, 0.0), second(p, 0.0), grad(p), z(config.hidden);
  double beta1_pow = 1.0, beta2_pow = 1.0;

  Rng rng(seed.Child("mlp/batches"));
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    for (size_t start = 0; start < n; start += batch) {
      const size_t count = std::min(batch, n - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      AccumulateMlp(net.params_, net.input_dim_, net.hidden_, data.x, data.y,
                    std::span<const size_t>(order).subspan(start, count), grad,
                    z);
      beta1_pow *= kBeta1;
      beta2_pow *= kBeta2;
      const double scale = 1.0 / static_cast<double>(count);
      for (size_t i = 0; i < p; ++i) {
        const double g = grad[i] * scale;
        first[i] = kBeta1 * first[i] + (1 - kBeta1) * g;
        second[i] = kBeta2 * second[i] + (1 - kBeta2) * g * g;
        const double m_hat = first[i] / (1 - beta1_pow);
        const double v_hat = second[i] / (1 - beta2_pow);
        net.params_[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
      }
    }
  }
  return net;
}

Forest Forest::Train(const Matrix& positives, const Matrix& negatives,
                     const ForestConfig& config, RandomSeed seed) {
  const Dataset data = Combine(positives, negatives);
  const size_t n = data.x.rows();
  const size_t m = data.x.cols();
  const size_t max_features =
      config.max_features > 0
          ? std::min(config.max_features, m)
          : std::max<size_t>(1, static_cast<size_t>(
                                    std::floor(std::sqrt(static_cast<double>(m)))));

  Forest forest;
  forest.input_dim_ = m;
  forest.trees_.reserve(config.trees);

  for (size_t t = 0; t < config.trees; ++t) {
    Rng rng(seed.Child("forest/tree").Child(t));
    std::vector<size_t> sample(n);
    for (auto& s : sample) s = rng.Index(n);

    Tree tree;
    // Depth-first growth; each call owns the sample indices of its node.
    auto grow = [&](auto&& self, std::vector<size_t> idx, size_t depth) -> int {
      const int node_id = static_cast<int>(tree.size());
      tree.push_back(Node{});
      size_t pos = 0;
      for (size_t i : idx) pos += static_cast<size_t>(data.y[i]);
      const double total = static_cast<double>(idx.size());
      tree[node_id].value = static_cast<double>(pos) / total;
      if (depth >= config.max_depth || idx.size() < 2 || pos == 0 ||
          pos == idx.size()) {
        return node_id;
      }

      std::vector<size_t> features(m);
      std::iota(features.begin(), features.end(), size_t{0});
      rng.Shuffle(features);

      double best_impurity = std::numeric_limits<double>::infinity();
      int best_feature = -1;
      double best_threshold = 0.0;
      size_t tried = 0;
      std::vector<size_t> sorted = idx;
      for (size_t f : features) {
        if (tried >= max_features) break;
        std::sort(sorted.begin(), sorted.end(), [&](size_t a, size_t b) {
          const double va = data.x(a, f), vb = data.x(b, f);
          return va < vb || (va == vb && a < b);
        });
        if (data.x(sorted.front(), f) == data.x(sorted.back(), f)) continue;
        ++tried;
        size_t left_pos = 0;
        for (size_t i = 0; i + 1 < sorted.size(); ++i) {
          left_pos += static_cast<size_t>(data.y[sorted[i]]);
          const double v = data.x(sorted[i], f);
          const double next = data.x(sorted[i + 1], f);
          if (v == next) continue;
          const double nl = static_cast<double>(i + 1);
          const double nr = total - nl;
          const double pl = static_cast<double>(left_pos) / nl;
          const double pr = static_cast<double>(pos - left_pos) / nr;
          const double impurity =
              nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr);
          if (impurity < best_impurity) {
            best_impurity = impurity;
            best_feature = static_cast<int>(f);
            best_threshold = v + (next - v) / 2.0;
            if (best_threshold >= next) best_threshold = v;
          }
        }
      }
      if (best_feature < 0) return node_id;

      std::vector<size_t> left, right;
      for (size_t i : idx) {
        (data.x(i, static_cast<size_t>(best_feature)) <= best_threshold ? left
                                                                        : right)
            .push_back(i);
      }
      tree[node_id].feature = best_feature;
      tree[node_id].threshold = best_threshold;
      const int l = self(self, std::move(left), depth + 1);
      const int r = self(self, std::move(right), depth + 1);
      tree[node_id].left = l;
      tree[node_id].right = r;
      return node_id;
    };
    grow(grow, std::move(sample), 0);
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double Forest::Score(std::span<const double> query) const {
  CheckDim(input_dim_, query.size());
  double sum = 0.0;
  for (const Tree& tree : trees_) {
    int node = 0;
    while (tree[node].feature >= 0) {
      const Node& nd = tree[node];
      node = query[static_cast<size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                    : nd.right;
    }
    sum += tree[node].value;
  }
  return sum / static_cast<double>(trees_.size());
}

std::unique_ptr<Discriminator> TrainDiscriminator(
    DiscriminatorKind kind, const Matrix& positives, const Matrix& negatives,
    const DiscriminatorConfig& config, RandomSeed seed) {
  if (positives.rows() < 2 || negatives.rows() < 2) {
    throw ValidationError("discriminator training needs at least two rows per "
                          "class (got " + std::to_string(positives.rows()) +
                          " and " + std::to_string(negatives.rows()) + ")");
  }
  if (positives.cols() != negatives.cols()) {
    throw std::invalid_argument("discriminator classes differ in width");
  }
  if (kind == DiscriminatorKind::kMlp) {
    return std::make_unique<Mlp>(Mlp::Train(positives, negatives, config.mlp, seed));
  }
  return std::make_unique<Forest>(
      Forest::Train(positives, negatives, config.forest, seed));
}

}  // namespace tabaudit
