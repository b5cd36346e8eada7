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

#include "risd2d/phase.hpp"
#include "risd2d/random.hpp"
#include "risd2d/topology.hpp"
#include "risd2d/types.hpp"

namespace risd2d {

struct ChannelParams {
  double beta = 1.0;
  double alpha = 3.0;
  double nakagami_shape = 1.0;
  double nakagami_spread = 1.0;
  double amplitude = 1.0;
  bool deterministic = false;

  void validate() const;
};

/// One Monte Carlo draw of every link gain for a given RIS position.
///
/// Element gains are stored column-per-node: `tx_ris.col(i)` is the N-vector
/// from D2D transmitter i to the RIS. Direct links are scalars per node or
/// node pair. All gains are real, non-negative amplitudes.
struct ChannelRealization {
  Eigen::MatrixXd tx_ris;    // N x I
  Eigen::MatrixXd ris_rx;    // N x I
  Eigen::MatrixXd user_ris;  // N x K
  Eigen::VectorXd ris_bs;    // N
  Eigen::VectorXd tx_rx;     // I, D_t,i -> D_r,i
  Eigen::MatrixXd user_rx;   // K x I, CU_k -> D_r,i
  Eigen::VectorXd tx_bs;     // I, D_t,i -> BS
  Eigen::VectorXd user_bs;   // K, CU_k -> BS

  int num_elements() const { return static_cast<int>(ris_bs.size()); }
};

/// beta * m * sqrt(d^-alpha). Throws std::domain_error for d <= 0 or m < 0.
double pathloss_gain(double distance, double fading, const ChannelParams& params);

/// Nakagami(shape, spread) amplitude as the square root of a
/// Gamma(shape, spread / shape) draw; 1.0 in deterministic mode.
double sample_nakagami(double shape, double spread, Rng& rng);
double sample_fading(const ChannelParams& params, Rng& rng);

/// Draws all gains for an RIS placed at `ris_pos`. The number and order of
/// random draws depends only on (I, K, N), never on positions, so two calls
/// from copies of the same stream share fading across RIS placements.
ChannelRealization realize_channels(const Topology& topology, const Position& ris_pos,
                                    int num_elements, const ChannelParams& params, Rng& rng);

/// sum_n c_n * h_in[n] * h_out[n] + h_los, where c is the reflection diagonal.
template <typename InDerived, typename OutDerived>
std::complex<double> cascaded_gain(const Eigen::MatrixBase<InDerived>& h_in,
                                   const Eigen::VectorXcd& coefficients,
                                   const Eigen::MatrixBase<OutDerived>& h_out, double h_los) {
  if (h_in.size() != coefficients.size() || h_out.size() != coefficients.size()) {
    throw std::invalid_argument("cascaded_gain: element vector length mismatch");
  }
  std::complex<double> acc(h_los, 0.0);
  for (Eigen::Index n = 0; n < coefficients.size(); ++n) {
    acc += coefficients[n] * (h_in[n] * h_out[n]);
  }
  return acc;
}

template <typename InDerived, typename OutDerived>
std::complex<double> cascaded_gain(const Eigen::MatrixBase<InDerived>& h_in, const PhaseConfig& phase,
                                   const Eigen::MatrixBase<OutDerived>& h_out, double h_los) {
  return cascaded_gain(h_in, phase.coefficients(), h_out, h_los);
}

}  // namespace risd2d
