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

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "risd2d/env.hpp"
#include "risd2d/phase.hpp"
#include "risd2d/radio.hpp"
#include "risd2d/random.hpp"
#include "risd2d/scenario.hpp"

namespace risd2d {

/// Allocation-free sum-rate evaluator for one realization. Each effective
/// link gain is c . w + h_los with w the element-wise product of the two hops,
/// so the products are formed once and reused for every phase candidate.
class RealizationEvaluator {
 public:
  RealizationEvaluator(const Scenario& scenario, const ChannelRealization& real);

  /// Sum rate under the reflection diagonal `coefficients`.
  double sum_rate(const Eigen::VectorXcd& coefficients) const;

 private:
  const Scenario* scenario_;
  int pairs_ = 0;
  int users_ = 0;
  // Columns: D2D direct (I), D2D -> BS (I), user -> BS (K), user k -> rx i (K * I, k-major).
  Eigen::MatrixXd products_;
  Eigen::VectorXd los_;
  mutable Eigen::VectorXd power_;
};

struct OracleResult {
  PhaseConfig phase;
  int cell = 0;
  RateEstimate sum_rate;
  std::size_t evaluations = 0;
};

/// Flat index cell * L^N + sum_n steps[n] * L^n, the enumeration order.
PhaseConfig phase_from_index(std::size_t index, int num_elements, int levels, double amplitude);

/// Exhaustive search over every phase lattice point and grid cell, all
/// evaluated on the same `draws` fading realizations (copies of `stream`).
/// Ties resolve to the lowest flat index. Throws CapacityError when
/// L^N * O > ceiling.
OracleResult exhaustive_oracle(const Scenario& scenario, int num_elements, int levels, int draws,
                               const Rng& stream, std::size_t ceiling = kDefaultJointCeiling);

struct RandomPhaseResult {
  int cell = 0;
  RateEstimate sum_rate;
};

/// Best cell when phases are drawn uniformly from the lattice on every
/// realization. Fading comes from copies of `fading_stream` and phases from
/// copies of `phase_stream`, both shared by every cell.
RandomPhaseResult random_phase_best_cell(const Scenario& scenario, int num_elements, int levels, int draws,
                                         const Rng& fading_stream, const Rng& phase_stream);

/// Sum rate with the reflection path removed (A = 0). `num_elements` only
/// keeps the fading draws aligned with RIS-enabled evaluations of the stream.
RateEstimate no_ris_sum_rate(const Scenario& scenario, int num_elements, int draws, const Rng& stream);

}  // namespace risd2d
