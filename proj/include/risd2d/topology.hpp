// Copyright 2026 The risd2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "risd2d/types.hpp"

namespace risd2d {

/// Fixed node layout of the deployment area.
///
/// `reuse(i, k)` is 1 when D2D pair i shares the uplink resource block of
/// cellular user k. Each row holds exactly one 1.
struct Topology {
  std::vector<Position> d2d_tx;
  std::vector<Position> d2d_rx;
  std::vector<Position> cell_users;
  Position bs = Position::Zero();
  double area_side = 100.0;
  int grid_count = 25;
  Eigen::MatrixXi reuse;

  int num_pairs() const { return static_cast<int>(d2d_tx.size()); }
  int num_users() const { return static_cast<int>(cell_users.size()); }
  int grid_side() const;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  /// One D2D pair and one cellular user in a 100 m square, 5x5 grid.
  static Topology reference_layout();
};

}  // namespace risd2d
