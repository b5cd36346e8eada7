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
#include <functional>
#include <map>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "risd2d/env.hpp"
#include "risd2d/neuralnet.hpp"
#include "risd2d/radio.hpp"
#include "risd2d/random.hpp"

namespace risd2d {

enum class LrSchedule {
  constant,  ///< lr_base
  inverse,   ///< lr_base / t
  literal,   ///< 1 / iterations
};

LrSchedule parse_lr_schedule(std::string_view name);
std::string_view to_string(LrSchedule schedule);

struct TrainConfig {
  int iterations = 10'000;
  int episode_horizon = 200;
  double gamma = 0.9;
  // Probability of the greedy action: min(eps_start + t * eps_step, eps_max).
  double eps_start = 0.0;
  double eps_step = 0.01;
  double eps_max = 0.9;
  std::size_t replay_capacity = 2000;
  std::size_t minibatch_size = 32;
  int target_update_period = 100;
  LrSchedule lr_schedule = LrSchedule::inverse;
  double lr_base = 0.05;
  double table_ceiling = 1e7;
  // DQN only: subtract the mean reward of the first minibatch_size
  // transitions from every reward used in a target.
  bool center_rewards = false;

  void validate() const;
};

double epsilon_at(int iteration, const TrainConfig& cfg);
double learning_rate(int iteration, const TrainConfig& cfg);

/// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(const Eigen::VectorXd& values);

/// Greedy with probability `greedy_prob`, otherwise uniform over all actions.
/// Always consumes exactly one coin and one uniform index from `rng`, so two
/// agents fed the same stream explore identically whenever both explore.
std::size_t select_action(const Eigen::VectorXd& q_values, double greedy_prob, Rng& rng);

/// r + gamma * max_a' q_next[a'].
double q_target(double reward, const Eigen::VectorXd& q_next, double gamma);

/// Fixed-capacity FIFO of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition transition);
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t inserted() const { return inserted_; }
  /// 0 is the oldest retained transition.
  const Transition& at(std::size_t age_rank) const;
  /// Uniform with replacement.
  const Transition& sample(Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t inserted_ = 0;
  std::vector<Transition> entries_;
};

struct IterationRecord {
  int iteration = 0;
  std::size_t action = 0;
  double reward = 0.0;
  double running_avg = 0.0;  // sum_{s<=t} r_s / t
  double loss = 0.0;
  double epsilon = 0.0;
};

using MetricsLog = std::vector<IterationRecord>;

/// Appends a record and maintains the running average.
void log_iteration(MetricsLog& log, std::size_t action, double reward, double loss, double epsilon);

struct DqnHooks {
  /// Called after every iteration with the online and target networks.
  std::function<void(int, const nn::QNetwork<double>&, const nn::QNetwork<double>&)> after_step;
};

struct DqnResult {
  nn::QNetwork<double> network;
  MetricsLog log;
};

/// Deep Q-learning with experience replay and a periodically synchronized
/// target network. Works with any architecture whose input width and output
/// count match the environment.
DqnResult dqn_train(Environment& env, const nn::NetworkArch& arch, const TrainConfig& cfg, Rng& rng,
                    const DqnHooks& hooks = {});

/// Lazily allocated action-value table keyed by the environment's state key.
class QTable {
 public:
  explicit QTable(std::size_t action_count) : action_count_(action_count) {}

  Eigen::VectorXd& row(const std::vector<int>& key);
  /// Zeros for unseen states.
  Eigen::VectorXd values(const std::vector<int>& key) const;
  std::size_t visited() const { return rows_.size(); }
  std::size_t action_count() const { return action_count_; }
  const std::map<std::vector<int>, Eigen::VectorXd>& rows() const { return rows_; }

 private:
  std::size_t action_count_;
  std::map<std::vector<int>, Eigen::VectorXd> rows_;
};

struct QLearningResult {
  QTable table;
  MetricsLog log;
};

/// Tabular Q-learning under the same exploration schedule. Throws
/// CapacityError when the discrete state space exceeds cfg.table_ceiling.
QLearningResult qlearning_train(Environment& env, const TrainConfig& cfg, Rng& rng);

/// Uniform actions; no learning.
MetricsLog random_policy(Environment& env, int iterations, int episode_horizon, Rng& rng);

/// Greedy action for the current state.
using GreedyPolicy = std::function<std::size_t(const Environment&)>;

GreedyPolicy greedy_policy(const nn::QNetwork<double>& net);
GreedyPolicy greedy_policy(const QTable& table);

/// Installation chosen by a greedy rollout.
struct Placement {
  PhaseConfig phase;
  int cell = 0;
  double score = 0.0;   // mean dynamic reward over the evaluation draws
  RateEstimate sum_rate;
  std::size_t distinct_visited = 0;
};

/// Runs the greedy policy for `horizon` steps from the canonical initial
/// state, then scores every distinct visited configuration (including the
/// initial one) by its mean reward over `eval_draws` realizations taken from
/// copies of `eval_stream`, and returns the best. Ties keep the earliest visit.
Placement greedy_placement(RisEnvironment& env, const GreedyPolicy& policy, int horizon, int eval_draws,
                           const Rng& eval_stream);

/// Mean reward and sum rate of a fixed configuration on copies of a stream.
struct ConfigurationScore {
  double reward = 0.0;
  RateEstimate sum_rate;
};

ConfigurationScore evaluate_configuration(const Scenario& scenario, const PhaseConfig& phase, int cell,
                                          int draws, const Rng& stream);

}  // namespace risd2d
