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

#include "tabaudit/neighbors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace tabaudit {

NeighborIndex::NeighborIndex(Matrix points) : points_(std::move(points)) {}

void NeighborIndex::CheckQuery(std::span<const double> query) const {
  if (query.size() != points_.cols()) {
    throw std::invalid_argument("neighbor query has dimension " +
                                std::to_string(query.size()) + ", index has " +
                                std::to_string(points_.cols()));
  }
}

std::vector<Neighbor> NeighborIndex::Knn(std::span<const double> query,
                                         size_t k) const {
  CheckQuery(query);
  if (k == 0 || k > size()) {
    throw std::invalid_argument("knn: k=" + std::to_string(k) +
                                " outside [1, " + std::to_string(size()) + "]");
  }
  std::vector<std::pair<double, size_t>> d2(size());
  for (size_t i = 0; i < size(); ++i) {
    d2[i] = {SquaredDistance(query, points_.Row(i)), i};
  }
  // pair ordering compares squared distance, then id.
  std::partial_sort(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(k),
                    d2.end());
  std::vector<Neighbor> out(k);
  for (size_t i = 0; i < k; ++i) {
    out[i] = {d2[i].second, std::sqrt(d2[i].first)};
  }
  return out;
}

double NeighborIndex::NearestDistance(std::span<const double> query) const {
  CheckQuery(query);
  if (size() == 0) throw std::invalid_argument("nearest distance: empty index");
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < size(); ++i) {
    best = std::min(best, SquaredDistance(query, points_.Row(i)));
  }
  return std::sqrt(best);
}

size_t NeighborIndex::RadiusCount(std::span<const double> query,
                                  double radius) const {
  CheckQuery(query);
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  size_t count = 0;
  for (size_t i = 0; i < size(); ++i) {
    if (std::sqrt(SquaredDistance(query, points_.Row(i))) <= radius) ++count;
  }
  return count;
}

}  // namespace tabaudit
