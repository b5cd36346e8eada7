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

#include "risd2d/channel.hpp"
#include "risd2d/phase.hpp"
#include "risd2d/random.hpp"
#include "risd2d/topology.hpp"

namespace risd2d {

/// Linear-scale radio parameters. Powers in watts, bandwidths in hertz,
/// thresholds as linear SINR.
struct RadioConfig {
  Eigen::VectorXd p_d2d;    // I
  Eigen::VectorXd p_cell;   // K
  double noise_power = 0.0;
  Eigen::VectorXd bw_d2d;   // I
  Eigen::VectorXd bw_cell;  // K
  double gamma_min_d2d = 0.1;
  double gamma_min_cell = 0.05;

  /// Same power and unit bandwidth on every link.
  static RadioConfig uniform(int pairs, int users, double p_d2d_watt, double p_cell_watt,
                             double noise_watt, double gamma_min_d2d, double gamma_min_cell);
  void validate(int pairs, int users) const;
};

double dbm_to_watt(double dbm);
double db_to_linear(double db);
double linear_to_db(double linear);

/// Effective end-to-end gains for every link under a reflection diagonal.
struct LinkGains {
  Eigen::VectorXcd d2d;         // h_D per pair
  Eigen::MatrixXcd user_to_rx;  // h_{C,D}, K x I
  Eigen::VectorXcd cell;        // h_C per user
  Eigen::VectorXcd tx_to_bs;    // h_{D,BS} per pair
};

LinkGains compose_links(const ChannelRealization& real, const Eigen::VectorXcd& coefficients);

double sinr_d2d(const LinkGains& links, const RadioConfig& cfg, const Topology& topo, int pair);
double sinr_cellular(const LinkGains& links, const RadioConfig& cfg, const Topology& topo, int user);
double sinr_d2d(const ChannelRealization& real, const PhaseConfig& phase, const RadioConfig& cfg,
                const Topology& topo, int pair);
double sinr_cellular(const ChannelRealization& real, const PhaseConfig& phase, const RadioConfig& cfg,
                     const Topology& topo, int user);

struct RateBreakdown {
  double total = 0.0;
  double d2d = 0.0;       // sum_i R_i
  double cellular = 0.0;  // sum_k R_k
  Eigen::VectorXd sinr_d2d;
  Eigen::VectorXd sinr_cell;
};

RateBreakdown sum_rate(const LinkGains& links, const RadioConfig& cfg, const Topology& topo);
RateBreakdown sum_rate(const ChannelRealization& real, const Eigen::VectorXcd& coefficients,
                       const RadioConfig& cfg, const Topology& topo);
RateBreakdown sum_rate(const ChannelRealization& real, const PhaseConfig& phase, const RadioConfig& cfg,
                       const Topology& topo);

struct QosStatus {
  bool d2d_ok = false;
  bool cell_ok = false;
};

QosStatus qos_check(const Eigen::VectorXd& gammas_d2d, const Eigen::VectorXd& gammas_cell,
                    const RadioConfig& cfg);

struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int draws = 0;
};

/// Monte Carlo mean of the sum rate over independent realizations drawn from
/// `rng`. Pass a copy of a stream to evaluate several configurations on the
/// same fading draws.
RateEstimate expected_sum_rate(const Topology& topo, const Position& ris_pos, const PhaseConfig& phase,
                               const RadioConfig& cfg, const ChannelParams& params, int draws, Rng& rng);

/// Running mean and standard error accumulator.
class MeanAccumulator {
 public:
  void add(double x);
  int count() const { return count_; }
  double mean() const { return mean_; }
  double stderr_of_mean() const;
  RateEstimate estimate() const { return {mean(), stderr_of_mean(), count_}; }

 private:
  int count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace risd2d
