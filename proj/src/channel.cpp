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

#include "risd2d/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risd2d {

namespace {

bool inside(const Position& p, double side) {
  return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= side && p.y() <= side;
}

}  // namespace

int Topology::grid_side() const {
  return static_cast<int>(std::lround(std::sqrt(static_cast<double>(grid_count))));
}

void Topology::validate() const {
  if (!(area_side > 0.0)) throw std::invalid_argument("topology: area_side must be positive");
  if (d2d_tx.size() != d2d_rx.size()) {
    throw std::invalid_argument("topology: d2d_tx and d2d_rx must have the same length");
  }
  if (grid_count < 1 || grid_side() * grid_side() != grid_count) {
    throw std::invalid_argument("topology: grid_count must be a positive perfect square");
  }
  auto check = [&](const Position& p, const char* what) {
    if (!inside(p, area_side)) {
      throw std::invalid_argument(std::string("topology: ") + what + " outside the deployment area");
    }
  };
  for (const auto& p : d2d_tx) check(p, "d2d_tx");
  for (const auto& p : d2d_rx) check(p, "d2d_rx");
  for (const auto& p : cell_users) check(p, "cell_users");
  check(bs, "bs");
  if (reuse.rows() != num_pairs() || reuse.cols() != num_users()) {
    throw std::invalid_argument("topology: reuse must be I x K");
  }
  for (Eigen::Index i = 0; i < reuse.rows(); ++i) {
    int ones = 0;
    for (Eigen::Index k = 0; k < reuse.cols(); ++k) {
      const int v = reuse(i, k);
      if (v != 0 && v != 1) throw std::invalid_argument("topology: reuse entries must be 0 or 1");
      ones += v;
    }
    if (ones != 1) {
      throw std::invalid_argument("topology: each D2D pair must reuse exactly one uplink");
    }
  }
}

Topology Topology::reference_layout() {
  Topology t;
  t.d2d_tx = {Position(40, 20)};
  t.d2d_rx = {Position(60, 20)};
  t.cell_users = {Position(25, 55)};
  t.bs = Position(75, 55);
  t.area_side = 100.0;
  t.grid_count = 25;
  t.reuse = Eigen::MatrixXi::Ones(1, 1);
  return t;
}

PhaseConfig PhaseConfig::zeros(int num_elements, int levels, double amplitude) {
  PhaseConfig p;
  p.steps = Eigen::VectorXi::Zero(num_elements);
  p.levels = levels;
  p.amplitude = amplitude;
  return p;
}

double PhaseConfig::delta() const { return 2.0 * std::numbers::pi / levels; }

Eigen::VectorXd PhaseConfig::theta() const { return steps.cast<double>() * delta(); }

Eigen::VectorXcd PhaseConfig::coefficients() const {
  Eigen::VectorXcd c(steps.size());
  const double d = delta();
  for (Eigen::Index n = 0; n < steps.size(); ++n) {
    c[n] = std::polar(amplitude, steps[n] * d);
  }
  return c;
}

void PhaseConfig::shift(const Eigen::VectorXi& increments) {
  if (increments.size() != steps.size()) {
    throw std::invalid_argument("PhaseConfig::shift: length mismatch");
  }
  for (Eigen::Index n = 0; n < steps.size(); ++n) {
    steps[n] = ((steps[n] + increments[n]) % levels + levels) % levels;
  }
}

void ChannelParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("channel: alpha must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("channel: beta must be positive");
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) {
    throw std::invalid_argument("channel: amplitude must lie in [0, 1]");
  }
  if (!(nakagami_shape >= 0.5)) throw std::invalid_argument("channel: nakagami_shape must be >= 0.5");
  if (!(nakagami_spread > 0.0)) throw std::invalid_argument("channel: nakagami_spread must be positive");
}

double pathloss_gain(double distance, double fading, const ChannelParams& params) {
  if (!(distance > 0.0)) throw std::domain_error("pathloss_gain: distance must be positive");
  if (!(fading >= 0.0)) throw std::domain_error("pathloss_gain: fading amplitude must be non-negative");
  return params.beta * fading * std::sqrt(std::pow(distance, -params.alpha));
}

double sample_nakagami(double shape, double spread, Rng& rng) {
  if (!(shape >= 0.5) || !(spread > 0.0)) {
    throw std::domain_error("sample_nakagami: requires shape >= 0.5 and spread > 0");
  }
  std::gamma_distribution<double> power(shape, spread / shape);
  return std::sqrt(power(rng));
}

double sample_fading(const ChannelParams& params, Rng& rng) {
  if (params.deterministic) return 1.0;
  return sample_nakagami(params.nakagami_shape, params.nakagami_spread, rng);
}

ChannelRealization realize_channels(const Topology& topology, const Position& ris_pos,
                                    int num_elements, const ChannelParams& params, Rng& rng) {
  const int pairs = topology.num_pairs();
  const int users = topology.num_users();
  const Eigen::Index n = num_elements;
  ChannelRealization out;
  out.tx_ris.resize(n, pairs);
  out.ris_rx.resize(n, pairs);
  out.user_ris.resize(n, users);
  out.ris_bs.resize(n);
  out.tx_rx.resize(pairs);
  out.user_rx.resize(users, pairs);
  out.tx_bs.resize(pairs);
  out.user_bs.resize(users);

  auto link = [&](const Position& a, const Position& b) {
    return pathloss_gain((a - b).norm(), sample_fading(params, rng), params);
  };
  auto fill = [&](auto&& column, const Position& node) {
    for (Eigen::Index e = 0; e < n; ++e) column[e] = link(node, ris_pos);
  };

  for (int i = 0; i < pairs; ++i) fill(out.tx_ris.col(i), topology.d2d_tx[i]);
  for (int i = 0; i < pairs; ++i) fill(out.ris_rx.col(i), topology.d2d_rx[i]);
  for (int k = 0; k < users; ++k) fill(out.user_ris.col(k), topology.cell_users[k]);
  fill(out.ris_bs, topology.bs);
  for (int i = 0; i < pairs; ++i) out.tx_rx[i] = link(topology.d2d_tx[i], topology.d2d_rx[i]);
  for (int k = 0; k < users; ++k) {
    for (int i = 0; i < pairs; ++i) out.user_rx(k, i) = link(topology.cell_users[k], topology.d2d_rx[i]);
  }
  for (int i = 0; i < pairs; ++i) out.tx_bs[i] = link(topology.d2d_tx[i], topology.bs);
  for (int k = 0; k < users; ++k) out.user_bs[k] = link(topology.cell_users[k], topology.bs);
  return out;
}

}  // namespace risd2d
