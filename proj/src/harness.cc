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

#include "tabaudit/harness.h"

#include <cmath>
#include <cstdlib>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "tabaudit/ingest.h"

namespace tabaudit {
namespace {

constexpr size_t kComponents = 3;
constexpr double kCenterSpread = 3.0;
// Fixed so the population is the same for every case seed.
constexpr uint64_t kPopulationSeed = 0x7ab1e5eedULL;

TableSchema NumericSchema(size_t d) {
  std::vector<ColumnSpec> cols;
  for (size_t c = 0; c < d; ++c) {
    cols.push_back({"x" + std::to_string(c), ColumnKind::kNumeric, std::nullopt});
  }
  return TableSchema(std::move(cols));
}

DataTable Memorize(const DataTable& train, size_t m, double sigma, Rng& rng) {
  std::vector<size_t> picks;
  picks.reserve(m);
  while (picks.size() < m) {
    for (size_t i : rng.Permutation(train.rows())) {
      if (picks.size() == m) break;
      picks.push_back(i);
    }
  }
  DataTable copy = train.SelectRows(picks);
  if (sigma == 0.0) return copy;
  std::vector<DataTable::Column> cols;
  for (size_t c = 0; c < copy.cols(); ++c) {
    DataTable::Column col = copy.column(c);
    for (double& v : col.numbers) v += sigma * rng.Normal();
    cols.push_back(std::move(col));
  }
  return DataTable(copy.schema(), std::move(cols));
}

DataTable ResampleMarginals(const DataTable& train, size_t m, Rng& rng) {
  std::vector<DataTable::Column> cols(train.cols());
  for (size_t c = 0; c < train.cols(); ++c) {
    const bool numeric = train.schema().column(c).kind == ColumnKind::kNumeric;
    for (size_t i = 0; i < m; ++i) {
      const size_t r = rng.Index(train.rows());
      if (numeric) {
        cols[c].numbers.push_back(train.Number(r, c));
      } else {
        cols[c].tokens.push_back(train.Token(r, c));
      }
    }
  }
  return DataTable(train.schema(), std::move(cols));
}

DataTable FitGaussian(const DataTable& train, size_t m, Rng& rng) {
  if (!train.schema().AllNumeric()) {
    throw ValidationError("gaussian_fitter needs an all-numeric table");
  }
  const auto n = static_cast<Eigen::Index>(train.rows());
  const auto d = static_cast<Eigen::Index>(train.cols());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      x(r, c) = train.Number(static_cast<size_t>(r), static_cast<size_t>(c));
    }
  }
  const Eigen::VectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      n > 1 ? Eigen::MatrixXd(centered.transpose() * centered /
                              static_cast<double>(n - 1))
            : Eigen::MatrixXd::Zero(d, d);
  cov.diagonal().array() += 1e-6;
  const Eigen::MatrixXd lower = cov.llt().matrixL();

  std::vector<DataTable::Column> cols(static_cast<size_t>(d));
  Eigen::VectorXd z(d);
  for (size_t i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) z(c) = rng.Normal();
    const Eigen::VectorXd row = mean + lower * z;
    for (Eigen::Index c = 0; c < d; ++c) {
      cols[static_cast<size_t>(c)].numbers.push_back(row(c));
    }
  }
  return DataTable(train.schema(), std::move(cols));
}

}  // namespace

DataTable Generate(const ToyGenerator& generator, const DataTable& train,
                   size_t m) {
  if (m == 0) throw std::invalid_argument("generator output size must be >= 1");
  if (!(generator.noise_sigma >= 0.0)) {
    throw std::invalid_argument("memorizer noise must be non-negative");
  }
  Rng rng(generator.seed.Child("generate"));
  switch (generator.kind) {
    case GeneratorKind::kMemorizer:
      return Memorize(train, m, generator.noise_sigma, rng);
    case GeneratorKind::kMarginalResampler:
      return ResampleMarginals(train, m, rng);
    case GeneratorKind::kGaussianFitter:
      return FitGaussian(train, m, rng);
  }
  throw std::invalid_argument("unknown generator kind");
}

DataTable SamplePopulation(size_t n, size_t d, RandomSeed seed) {
  if (n == 0 || d == 0) throw std::invalid_argument("population needs n, d >= 1");
  Rng centers_rng(RandomSeed{kPopulationSeed}.Child(d));
  std::vector<std::vector<double>> centers(kComponents, std::vector<double>(d));
  for (auto& center : centers) {
    for (double& v : center) v = centers_rng.Uniform(-kCenterSpread, kCenterSpread);
  }
  Rng rng(seed.Child("population"));
  std::vector<DataTable::Column> cols(d);
  for (size_t i = 0; i < n; ++i) {
    const auto& center = centers[rng.Index(kComponents)];
    for (size_t c = 0; c < d; ++c) {
      cols[c].numbers.push_back(center[c] + rng.Normal());
    }
  }
  return DataTable(NumericSchema(d), std::move(cols));
}

FixtureCase MakeCase(const std::string& name, size_t n, size_t d,
                     RandomSeed seed) {
  ToyGenerator gen{GeneratorKind::kMemorizer, 0.0, seed.Child("generator")};
  bool fresh = false;
  if (name == "leaky") {
  } else if (name.starts_with("noisy-")) {
    const std::string text = name.substr(6);
    char* end = nullptr;
    gen.noise_sigma = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || !(gen.noise_sigma >= 0.0)) {
      throw ValidationError("fixture \"" + name + "\": bad noise level");
    }
  } else if (name == "private") {
    fresh = true;
  } else if (name == "gaussian") {
    gen.kind = GeneratorKind::kGaussianFitter;
  } else if (name == "marginal") {
    gen.kind = GeneratorKind::kMarginalResampler;
  } else {
    throw ValidationError("unknown fixture \"" + name +
                          "\" (expected leaky, noisy-<sigma>, private, "
                          "gaussian or marginal)");
  }
  const DataTable pool = SamplePopulation(2 * n, d, seed.Child("pool"));
  auto split = SplitReal(pool, SplitSpec{0.5, seed.Child("split")});
  DataTable synthetic =
      fresh ? SamplePopulation(n, d, seed.Child("fresh"))
            : Generate(gen, split.train, n);
  return FixtureCase{std::move(split.train), std::move(split.holdout),
                     std::move(split.reference), std::move(synthetic)};
}

}  // namespace tabaudit
