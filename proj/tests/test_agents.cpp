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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "risd2d/agents.hpp"
#include "risd2d/scenario.hpp"

using namespace risd2d;

namespace {

// One state, fixed reward per action.
class Bandit final : public Environment {
 public:
  explicit Bandit(std::vector<double> rewards) : rewards_(std::move(rewards)), state_(StateMatrix::Ones(2, 1)) {}
  std::size_t action_count() const override { return rewards_.size(); }
  Eigen::Index state_columns() const override { return 1; }
  StateMatrix reset() override { return state_; }
  StepResult step(std::size_t a) override { return {state_, rewards_.at(a), {}}; }
  const StateMatrix& state() const override { return state_; }
  std::vector<int> state_key() const override { return {0}; }
  double state_space_size() const override { return 1; }

 private:
  std::vector<double> rewards_;
  StateMatrix state_;
};

// States A=0, B=1. Action 0 stays, action 1 switches.
// Rewards: A stay 0.5, B stay 2, switching 0.
class Chain final : public Environment {
 public:
  Chain() { set(0); }
  std::size_t action_count() const override { return 2; }
  Eigen::Index state_columns() const override { return 1; }
  StateMatrix reset() override {
    set(0);
    return state_;
  }
  StepResult step(std::size_t a) override {
    double r = 0.0;
    if (a == 0) {
      r = s_ == 0 ? 0.5 : 2.0;
    } else {
      set(1 - s_);
    }
    return {state_, r, {}};
  }
  const StateMatrix& state() const override { return state_; }
  std::vector<int> state_key() const override { return {s_}; }
  double state_space_size() const override { return 2; }

 private:
  void set(int s) {
    s_ = s;
    state_ = StateMatrix::Constant(2, 1, s);
  }
  int s_ = 0;
  StateMatrix state_;
};

Scenario reference_scenario(bool deterministic) {
  Scenario s;
  s.channel.deterministic = deterministic;
  s.radio = RadioConfig::uniform(1, 1, dbm_to_watt(15), dbm_to_watt(30), dbm_to_watt(-116),
                                 db_to_linear(-10), db_to_linear(-13));
  return s;
}

RisEnvironment small_env(bool deterministic, int n = 1) {
  EnvConfig c;
  c.num_elements = n;
  c.action_mode = ActionMode::joint;
  return RisEnvironment(reference_scenario(deterministic), c, Rng(3));
}

Transition marker(double r) { return {StateMatrix::Zero(2, 1), 0, r, StateMatrix::Zero(2, 1)}; }

}  // namespace

TEST(Epsilon, Schedule) {
  TrainConfig cfg;
  EXPECT_EQ(epsilon_at(0, cfg), 0.0);
  EXPECT_NEAR(epsilon_at(45, cfg), 0.45, 1e-12);
  EXPECT_NEAR(epsilon_at(10000, cfg), 0.9, 1e-12);
  EXPECT_NEAR(epsilon_at(90, cfg), 0.9, 1e-12);
}

TEST(LearningRate, Schedules) {
  TrainConfig cfg;
  cfg.lr_base = 0.05;
  cfg.lr_schedule = LrSchedule::inverse;
  EXPECT_DOUBLE_EQ(learning_rate(0, cfg), 0.05);
  EXPECT_DOUBLE_EQ(learning_rate(10, cfg), 0.005);
  cfg.lr_schedule = LrSchedule::literal;
  cfg.iterations = 400;
  EXPECT_DOUBLE_EQ(learning_rate(7, cfg), 1.0 / 400);
  cfg.lr_schedule = LrSchedule::constant;
  EXPECT_DOUBLE_EQ(learning_rate(7, cfg), 0.05);
  EXPECT_EQ(parse_lr_schedule("inverse"), LrSchedule::inverse);
  EXPECT_THROW(parse_lr_schedule("adam"), std::invalid_argument);
}

TEST(SelectAction, GreedyAndTies) {
  Rng rng(1);
  Eigen::VectorXd q(4);
  q << 0.1, 3.0, -2.0, 2.9;
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select_action(q, 1.0, rng), 1u);
  const Eigen::VectorXd flat = Eigen::VectorXd::Constant(5, 1.5);
  EXPECT_EQ(select_action(flat, 1.0, rng), 0u);
}

TEST(SelectAction, UniformWhenNeverGreedy) {
  Rng rng(2);
  const int k = 10, n = 100000;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(k);
  q[3] = 100.0;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[select_action(q, 0.0, rng)];
  const double expect = static_cast<double>(n) / k;
  const double sigma = std::sqrt(n * (1.0 / k) * (1.0 - 1.0 / k));
  for (int c : counts) EXPECT_LE(std::abs(c - expect), 3 * sigma);
}

TEST(QTarget, Examples) {
  Eigen::VectorXd q(3);
  q << 2.0, -1.0, 0.5;
  EXPECT_NEAR(q_target(1.0, q, 0.9), 2.8, 1e-12);
  EXPECT_EQ(q_target(1.0, q, 0.0), 1.0);
  EXPECT_NEAR(q_target(0.3, Eigen::VectorXd::Constant(4, 7.0), 0.5), 3.8, 1e-12);
}

TEST(Replay, EvictsOldestFirst) {
  ReplayBuffer buf(5);
  for (int i = 0; i < 13; ++i) buf.push(marker(i));
  EXPECT_EQ(buf.size(), 5u);
  EXPECT_EQ(buf.inserted(), 13u);
  for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(buf.at(r).reward, 8.0 + r);
  Rng rng(4);
  std::vector<int> hits(13, 0);
  for (int i = 0; i < 5000; ++i) ++hits[static_cast<int>(buf.sample(rng).reward)];
  for (int i = 0; i < 8; ++i) EXPECT_EQ(hits[i], 0);
  for (int i = 8; i < 13; ++i) EXPECT_GT(hits[i], 800);
}

TEST(Dqn, ZeroIterationsReturnsInitialization) {
  Bandit env({2, 0, 1});
  TrainConfig cfg;
  cfg.iterations = 0;
  const nn::NetworkArch arch = nn::fc_arch(1, 3, 8);
  Rng rng(42);
  const DqnResult res = dqn_train(env, arch, cfg, rng);
  EXPECT_TRUE(res.log.empty());
  Rng expect_rng(42);
  Rng init(expect_rng());
  nn::QNetwork<double> expect(arch);
  nn::init_weights(expect, init);
  EXPECT_EQ(res.network, expect);
}

TEST(Dqn, RejectsMismatchedArchitecture) {
  Bandit env({2, 0, 1});
  Rng rng(1);
  EXPECT_THROW(dqn_train(env, nn::fc_arch(1, 4, 8), TrainConfig{}, rng), std::invalid_argument);
  EXPECT_THROW(dqn_train(env, nn::fc_arch(2, 3, 8), TrainConfig{}, rng), std::invalid_argument);
}

TEST(Dqn, BanditConvergesToBestArm) {
  Bandit env({2, 0, 1});
  TrainConfig cfg;
  cfg.iterations = 500;
  cfg.gamma = 0.0;
  cfg.minibatch_size = 8;
  cfg.target_update_period = 10;
  cfg.lr_schedule = LrSchedule::constant;
  cfg.lr_base = 0.05;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    const DqnResult res = dqn_train(env, nn::fc_arch(1, 3, 16), cfg, rng);
    EXPECT_EQ(argmax(nn::forward(res.network, env.state())), 0u) << "seed " << seed;
    int best = 0;
    for (std::size_t i = 400; i < 500; ++i) best += res.log[i].action == 0;
    EXPECT_GT(best, 80);
  }
}

TEST(Dqn, TargetNetworkLagsByPeriod) {
  RisEnvironment env = small_env(false);
  TrainConfig cfg;
  cfg.iterations = 120;
  cfg.target_update_period = 25;
  cfg.minibatch_size = 4;
  cfg.lr_schedule = LrSchedule::constant;
  cfg.lr_base = 1e-3;
  nn::QNetwork<double> snapshot;
  bool have_snapshot = false;
  int checks = 0;
  DqnHooks hooks;
  hooks.after_step = [&](int t, const nn::QNetwork<double>& online, const nn::QNetwork<double>& target) {
    if ((t + 1) % cfg.target_update_period == 0) {
      EXPECT_EQ(target, online) << t;
      snapshot = online;
      have_snapshot = true;
    } else if (have_snapshot) {
      EXPECT_EQ(target, snapshot) << t;
      EXPECT_FALSE(target == online) << t;
      ++checks;
    }
  };
  Rng rng(5);
  dqn_train(env, nn::cnn_arch(env.state_columns(), env.action_count(), {8, 3}, 32), cfg, rng, hooks);
  EXPECT_GT(checks, 80);
}

TEST(Dqn, DeterministicGivenSeed) {
  TrainConfig cfg;
  cfg.iterations = 150;
  cfg.minibatch_size = 8;
  auto run = [&] {
    RisEnvironment env = small_env(false);
    Rng rng(77);
    return dqn_train(env, nn::cnn_arch(env.state_columns(), env.action_count(), {4, 3}, 16), cfg, rng);
  };
  const DqnResult a = run(), b = run();
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].action, b.log[i].action);
    EXPECT_EQ(a.log[i].reward, b.log[i].reward);
    EXPECT_EQ(a.log[i].loss, b.log[i].loss);
  }
  EXPECT_EQ(a.network, b.network);
}

TEST(Dqn, RunningAverageAndEpsilonLogged) {
  RisEnvironment env = small_env(false);
  TrainConfig cfg;
  cfg.iterations = 100;
  Rng rng(6);
  const DqnResult res = dqn_train(env, nn::fc_arch(env.state_columns(), env.action_count(), 16), cfg, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < res.log.size(); ++i) {
    sum += res.log[i].reward;
    EXPECT_EQ(res.log[i].iteration, static_cast<int>(i) + 1);
    EXPECT_NEAR(res.log[i].running_avg, sum / (i + 1), 1e-9);
    EXPECT_DOUBLE_EQ(res.log[i].epsilon, epsilon_at(static_cast<int>(i), cfg));
    if (i + 1 < cfg.minibatch_size) EXPECT_EQ(res.log[i].loss, 0.0);
  }
}

TEST(QLearning, TwoStateChainMatchesBellmanSolution) {
  // gamma 0.5: V(B) = 4, V(A) = 2; Q(A) = (1.5, 2), Q(B) = (4, 1).
  Chain env;
  TrainConfig cfg;
  cfg.iterations = 20000;
  cfg.gamma = 0.5;
  cfg.eps_start = cfg.eps_step = cfg.eps_max = 0.0;
  cfg.episode_horizon = 1000;
  cfg.lr_schedule = LrSchedule::constant;
  cfg.lr_base = 0.1;
  Rng rng(8);
  const QLearningResult res = qlearning_train(env, cfg, rng);
  const Eigen::VectorXd a = res.table.values({0}), b = res.table.values({1});
  EXPECT_NEAR(a[0], 1.5, 1e-3);
  EXPECT_NEAR(a[1], 2.0, 1e-3);
  EXPECT_NEAR(b[0], 4.0, 1e-3);
  EXPECT_NEAR(b[1], 1.0, 1e-3);

  Rng again(8);
  Chain env2;
  EXPECT_EQ(qlearning_train(env2, cfg, again).table.rows(), res.table.rows());
}

TEST(QLearning, ZeroLearningRateLeavesTableAtZero) {
  Chain env;
  TrainConfig cfg;
  cfg.iterations = 500;
  cfg.lr_schedule = LrSchedule::constant;
  cfg.lr_base = 0.0;
  Rng rng(1);
  const QLearningResult res = qlearning_train(env, cfg, rng);
  for (const auto& [key, row] : res.table.rows()) EXPECT_TRUE(row.isZero(0.0));
}

TEST(QLearning, CapacityCeiling) {
  EnvConfig c;
  c.num_elements = 8;
  RisEnvironment env(reference_scenario(false), c, Rng(1));
  TrainConfig cfg;
  cfg.table_ceiling = 1e6;
  Rng rng(1);
  EXPECT_THROW(qlearning_train(env, cfg, rng), CapacityError);
}

TEST(RandomPolicy, UniformHistogramAndDeterminism) {
  Bandit env(std::vector<double>(7, 1.0));
  Rng rng(3);
  const int n = 100000;
  const MetricsLog log = random_policy(env, n, 200, rng);
  std::vector<int> counts(7, 0);
  for (const auto& r : log) ++counts[r.action];
  const double p = 1.0 / 7.0;
  for (int c : counts) EXPECT_LE(std::abs(c - n * p), 3 * std::sqrt(n * p * (1 - p)));
  Rng again(3);
  const MetricsLog repeat = random_policy(env, n, 200, again);
  for (int i = 0; i < n; i += 997) EXPECT_EQ(repeat[i].action, log[i].action);
}

TEST(RandomPolicy, RewardsAreNonNegative) {
  RisEnvironment env = small_env(false, 2);
  Rng rng(10);
  for (const auto& r : random_policy(env, 2000, 200, rng)) EXPECT_GE(r.reward, 0.0);
}

TEST(GreedyPlacement, IncludesInitialStateAndPicksBestVisited) {
  RisEnvironment env = small_env(true, 1);
  // Always jump to cell 12 with no phase change; visits (0, cell 0) and (0, cell 12).
  const std::size_t jump = encode_action({Eigen::VectorXi::Zero(1), 12}, 25, ActionMode::joint);
  const Placement p = greedy_placement(env, [&](const Environment&) { return jump; }, 10, 1, Rng(1));
  EXPECT_EQ(p.distinct_visited, 2u);
  const Rng eval(1);
  const double s0 = evaluate_configuration(env.scenario(), PhaseConfig::zeros(1, 8), 0, 1, eval).reward;
  const double s12 = evaluate_configuration(env.scenario(), PhaseConfig::zeros(1, 8), 12, 1, eval).reward;
  EXPECT_EQ(p.cell, s12 > s0 ? 12 : 0);
  EXPECT_DOUBLE_EQ(p.score, std::max(s0, s12));
}

TEST(Dqn, PolicyImprovesOnRandomSmallInstance) {
  TrainConfig cfg;
  cfg.iterations = 2000;
  cfg.lr_schedule = LrSchedule::constant;
  cfg.lr_base = 0.01;
  std::vector<double> dqn_scores, random_scores;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RisEnvironment env = small_env(true, 1);
    Rng rng(seed);
    const DqnResult res =
        dqn_train(env, nn::cnn_arch(env.state_columns(), env.action_count()), cfg, rng);
    dqn_scores.push_back(greedy_placement(env, greedy_policy(res.network), 200, 1, Rng(seed)).score);
    Rng rrng(seed);
    random_scores.push_back(random_policy(env, cfg.iterations, 200, rrng).back().running_avg);
  }
  std::sort(dqn_scores.begin(), dqn_scores.end());
  std::sort(random_scores.begin(), random_scores.end());
  EXPECT_GE(dqn_scores[1], random_scores[1]);
}
