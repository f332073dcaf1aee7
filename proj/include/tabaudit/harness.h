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

#ifndef TABAUDIT_HARNESS_H_
#define TABAUDIT_HARNESS_H_

#include <cstddef>
#include <string>

#include "tabaudit/core.h"

namespace tabaudit {

// Toy synthetic-data generators with known leakage behavior.
enum class GeneratorKind { kMemorizer, kMarginalResampler, kGaussianFitter };

struct ToyGenerator {
  GeneratorKind kind = GeneratorKind::kMemorizer;
  double noise_sigma = 0.0;  // memorizer only
  RandomSeed seed;
};

// memorizer: copies train rows, cycling through fresh random permutations so
//   that m >= n covers every row; numeric cells get N(0, sigma^2) noise.
// marginal_resampler: every column drawn independently from its empirical
//   marginal.
// gaussian_fitter: multivariate normal with the train mean and covariance
//   (plus 1e-6 on the diagonal); numeric tables only.
DataTable Generate(const ToyGenerator& generator, const DataTable& train,
                   size_t m);

// Draws n rows from the fixed population: an equal-weight mixture of three
// unit-variance Gaussians in d numeric dimensions whose centers do not depend
// on `seed`.
DataTable SamplePopulation(size_t n, size_t d, RandomSeed seed);

struct FixtureCase {
  DataTable train;
  DataTable holdout;
  DataTable reference;
  DataTable synthetic;
};

// 2n population rows split into n train rows and n/2 each of holdout and
// reference, then n synthetic rows from the named generator:
//   leaky       memorizer, sigma = 0
//   noisy-<s>   memorizer, sigma = s (e.g. noisy-0.1)
//   private     fresh population rows, independent of train
//   gaussian    gaussian_fitter on train
//   marginal    marginal_resampler on train
// Throws ValidationError for an unknown name.
FixtureCase MakeCase(const std::string& name, size_t n, size_t d,
                     RandomSeed seed);

}  // namespace tabaudit

#endif  // TABAUDIT_HARNESS_H_
