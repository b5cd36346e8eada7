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

#include "risd2d/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace risd2d {

namespace {

bool all_positive(const Eigen::VectorXd& v) { return (v.array() > 0.0).all(); }

}  // namespace

RadioConfig RadioConfig::uniform(int pairs, int users, double p_d2d_watt, double p_cell_watt,
                                 double noise_watt, double gamma_min_d2d, double gamma_min_cell) {
  RadioConfig cfg;
  cfg.p_d2d = Eigen::VectorXd::Constant(pairs, p_d2d_watt);
  cfg.p_cell = Eigen::VectorXd::Constant(users, p_cell_watt);
  cfg.noise_power = noise_watt;
  cfg.bw_d2d = Eigen::VectorXd::Ones(pairs);
  cfg.bw_cell = Eigen::VectorXd::Ones(users);
  cfg.gamma_min_d2d = gamma_min_d2d;
  cfg.gamma_min_cell = gamma_min_cell;
  return cfg;
}

void RadioConfig::validate(int pairs, int users) const {
  if (p_d2d.size() != pairs || bw_d2d.size() != pairs) {
    throw std::invalid_argument("radio: per-pair vectors must have one entry per D2D pair");
  }
  if (p_cell.size() != users || bw_cell.size() != users) {
    throw std::invalid_argument("radio: per-user vectors must have one entry per cellular user");
  }
  if (!all_positive(p_d2d) || !all_positive(p_cell)) {
    throw std::invalid_argument("radio: transmit powers must be positive");
  }
  if (!all_positive(bw_d2d) || !all_positive(bw_cell)) {
    throw std::invalid_argument("radio: bandwidths must be positive");
  }
  if (!(noise_power > 0.0)) throw std::invalid_argument("radio: noise power must be positive");
  if (!(gamma_min_d2d > 0.0) || !(gamma_min_cell > 0.0)) {
    throw std::invalid_argument("radio: SINR thresholds must be positive");
  }
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

LinkGains compose_links(const ChannelRealization& real, const Eigen::VectorXcd& coefficients) {
  const Eigen::Index pairs = real.tx_rx.size();
  const Eigen::Index users = real.user_bs.size();
  LinkGains g;
  g.d2d.resize(pairs);
  g.user_to_rx.resize(users, pairs);
  g.cell.resize(users);
  g.tx_to_bs.resize(pairs);
  for (Eigen::Index i = 0; i < pairs; ++i) {
    g.d2d[i] = cascaded_gain(real.tx_ris.col(i), coefficients, real.ris_rx.col(i), real.tx_rx[i]);
    g.tx_to_bs[i] = cascaded_gain(real.tx_ris.col(i), coefficients, real.ris_bs, real.tx_bs[i]);
  }
  for (Eigen::Index k = 0; k < users; ++k) {
    g.cell[k] = cascaded_gain(real.user_ris.col(k), coefficients, real.ris_bs, real.user_bs[k]);
    for (Eigen::Index i = 0; i < pairs; ++i) {
      g.user_to_rx(k, i) =
          cascaded_gain(real.ris_rx.col(i), coefficients, real.user_ris.col(k), real.user_rx(k, i));
    }
  }
  return g;
}

double sinr_d2d(const LinkGains& links, const RadioConfig& cfg, const Topology& topo, int pair) {
  double interference = 0.0;
  for (int k = 0; k < topo.num_users(); ++k) {
    if (topo.reuse(pair, k) != 0) interference += cfg.p_cell[k] * std::norm(links.user_to_rx(k, pair));
  }
  return cfg.p_d2d[pair] * std::norm(links.d2d[pair]) / (interference + cfg.noise_power);
}

double sinr_cellular(const LinkGains& links, const RadioConfig& cfg, const Topology& topo, int user) {
  double interference = 0.0;
  for (int i = 0; i < topo.num_pairs(); ++i) {
    if (topo.reuse(i, user) != 0) interference += cfg.p_d2d[i] * std::norm(links.tx_to_bs[i]);
  }
  return cfg.p_cell[user] * std::norm(links.cell[user]) / (interference + cfg.noise_power);
}

double sinr_d2d(const ChannelRealization& real, const PhaseConfig& phase, const RadioConfig& cfg,
                const Topology& topo, int pair) {
  return sinr_d2d(compose_links(real, phase.coefficients()), cfg, topo, pair);
}

double sinr_cellular(const ChannelRealization& real, const PhaseConfig& phase, const RadioConfig& cfg,
                     const Topology& topo, int user) {
  return sinr_cellular(compose_links(real, phase.coefficients()), cfg, topo, user);
}

RateBreakdown sum_rate(const LinkGains& links, const RadioConfig& cfg, const Topology& topo) {
  RateBreakdown out;
  out.sinr_d2d.resize(topo.num_pairs());
  out.sinr_cell.resize(topo.num_users());
  for (int i = 0; i < topo.num_pairs(); ++i) {
    out.sinr_d2d[i] = sinr_d2d(links, cfg, topo, i);
    out.d2d += cfg.bw_d2d[i] * std::log2(1.0 + out.sinr_d2d[i]);
  }
  for (int k = 0; k < topo.num_users(); ++k) {
    out.sinr_cell[k] = sinr_cellular(links, cfg, topo, k);
    out.cellular += cfg.bw_cell[k] * std::log2(1.0 + out.sinr_cell[k]);
  }
  out.total = out.d2d + out.cellular;
  return out;
}

RateBreakdown sum_rate(const ChannelRealization& real, const Eigen::VectorXcd& coefficients,
                       const RadioConfig& cfg, const Topology& topo) {
  return sum_rate(compose_links(real, coefficients), cfg, topo);
}

RateBreakdown sum_rate(const ChannelRealization& real, const PhaseConfig& phase, const RadioConfig& cfg,
                       const Topology& topo) {
  return sum_rate(real, phase.coefficients(), cfg, topo);
}

QosStatus qos_check(const Eigen::VectorXd& gammas_d2d, const Eigen::VectorXd& gammas_cell,
                    const RadioConfig& cfg) {
  return {(gammas_d2d.array() >= cfg.gamma_min_d2d).all(),
          (gammas_cell.array() >= cfg.gamma_min_cell).all()};
}

RateEstimate expected_sum_rate(const Topology& topo, const Position& ris_pos, const PhaseConfig& phase,
                               const RadioConfig& cfg, const ChannelParams& params, int draws, Rng& rng) {
  if (draws < 1) throw std::invalid_argument("expected_sum_rate: draws must be >= 1");
  const Eigen::VectorXcd coefficients = phase.coefficients();
  MeanAccumulator acc;
  for (int d = 0; d < draws; ++d) {
    const auto real = realize_channels(topo, ris_pos, phase.size(), params, rng);
    acc.add(sum_rate(real, coefficients, cfg, topo).total);
  }
  return acc.estimate();
}

void MeanAccumulator::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / count_;
  m2_ += delta * (x - mean_);
}

double MeanAccumulator::stderr_of_mean() const {
  if (count_ < 2) return 0.0;
  return std::sqrt(m2_ / (count_ - 1) / count_);
}

}  // namespace risd2d
