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

#ifndef TABAUDIT_NEIGHBORS_H_
#define TABAUDIT_NEIGHBORS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "tabaudit/core.h"

namespace tabaudit {

struct Neighbor {
  size_t id = 0;
  double distance = 0.0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Exact Euclidean neighbor queries over a fixed point set. Queries scan every
// point; ties in distance are broken by ascending point id.
class NeighborIndex {
 public:
  explicit NeighborIndex(Matrix points);

  size_t size() const { return points_.rows(); }
  size_t dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }

  // The k closest points, ascending by (distance, id). Throws
  // std::invalid_argument when k is 0 or exceeds size().
  std::vector<Neighbor> Knn(std::span<const double> query, size_t k) const;

  double NearestDistance(std::span<const double> query) const;

  // Number of points with distance <= radius.
  size_t RadiusCount(std::span<const double> query, double radius) const;

 private:
  void CheckQuery(std::span<const double> query) const;

  Matrix points_;
};

}  // namespace tabaudit

#endif  // TABAUDIT_NEIGHBORS_H_
