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

#include <complex>

#include <Eigen/Dense>

namespace risd2d {

/// Quantized RIS configuration: element n applies amplitude A and phase
/// steps[n] * 2*pi/levels. Steps always live in [0, levels).
struct PhaseConfig {
  Eigen::VectorXi steps;
  int levels = 8;
  double amplitude = 1.0;

  static PhaseConfig zeros(int num_elements, int levels, double amplitude = 1.0);

  int size() const { return static_cast<int>(steps.size()); }
  double delta() const;
  Eigen::VectorXd theta() const;
  /// Diagonal of the reflection matrix, A * exp(j * theta_n).
  Eigen::VectorXcd coefficients() const;

  /// Adds `increments` (in lattice steps) element-wise, wrapping mod levels.
  void shift(const Eigen::VectorXi& increments);

  bool operator==(const PhaseConfig& other) const {
    return levels == other.levels && amplitude == other.amplitude && steps == other.steps;
  }
};

}  // namespace risd2d
