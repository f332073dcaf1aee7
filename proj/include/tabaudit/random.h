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

#ifndef TABAUDIT_RANDOM_H_
#define TABAUDIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace tabaudit {

// A 64-bit seed. Child streams are derived from (seed, tag), so the stream a
// worker sees never depends on scheduling order.
struct RandomSeed {
  uint64_t value = 0;

  RandomSeed Child(std::string_view tag) const;
  RandomSeed Child(uint64_t index) const;

  friend bool operator==(const RandomSeed&, const RandomSeed&) = default;
};

// Deterministic generator. Distributions are implemented here rather than
// through <random> distribution objects, whose output is implementation
// defined; only the mt19937_64 engine (fully specified) is used.
class Rng {
 public:
  explicit Rng(RandomSeed seed) : engine_(seed.value) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Standard normal via Box-Muller; the spare value is cached.
  double Normal();

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  size_t Index(size_t n);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[Index(i)]);
    }
  }

  std::vector<size_t> Permutation(size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 finalizer.
uint64_t MixBits(uint64_t x);

}  // namespace tabaudit

#endif  // TABAUDIT_RANDOM_H_
