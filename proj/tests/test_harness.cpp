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

#include <set>

#include "risd2d/config.hpp"
#include "risd2d/experiments.hpp"
#include "risd2d/random.hpp"

using namespace risd2d;

namespace {

std::string tiny(const std::string& extra) {
  return "[ris]\nnum_elements = 1\naction_mode = joint\n"
         "[train]\niterations = 40\nminibatch_size = 4\n"
         "[experiment]\nseeds = 1, 2\neval_draws = 3\neval_horizon = 5\n" +
         extra;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyFileGivesDefaults) {
  const ExperimentConfig cfg = parse_config("");
  EXPECT_EQ(cfg.canonical(), ExperimentConfig::defaults().canonical());
  EXPECT_EQ(cfg.env.num_elements, 16);
  EXPECT_EQ(cfg.env.action_mode, ActionMode::factored);
  EXPECT_NEAR(cfg.scenario.radio.p_d2d[0], dbm_to_watt(15), 1e-18);
  EXPECT_NEAR(cfg.scenario.radio.p_cell[0], 1.0, 1e-15);
  EXPECT_NEAR(cfg.scenario.radio.noise_power, dbm_to_watt(-116), 1e-28);
  EXPECT_NEAR(cfg.scenario.radio.gamma_min_d2d, 0.1, 1e-15);
  EXPECT_NEAR(cfg.scenario.radio.gamma_min_cell, db_to_linear(-13), 1e-15);
  EXPECT_EQ(cfg.scenario.channel.alpha, 3.0);
  EXPECT_EQ(cfg.train.gamma, 0.9);
  EXPECT_EQ(cfg.conv.num_maps, 8);
  EXPECT_EQ(cfg.conv.kernel_width, 3);
}

TEST(Config, UnitSuffixes) {
  EXPECT_NEAR(parse_ratio("k", "-10dB"), 0.1, 1e-15);
  EXPECT_NEAR(parse_ratio("k", "-10 dB"), 0.1, 1e-15);
  EXPECT_EQ(parse_ratio("k", "0.25"), 0.25);
  EXPECT_NEAR(parse_power("k", "30dBm"), 1.0, 1e-15);
  EXPECT_EQ(parse_power("k", "0.5 W"), 0.5);
  EXPECT_EQ(parse_power("k", "0.5"), 0.5);
  EXPECT_THROW(parse_power("k", "loud"), ConfigError);
}

TEST(Config, ParsesSectionsAndLists) {
  const ExperimentConfig cfg = parse_config(
      "; comment\n[scenario]\nd2d_tx = 10,10; 20,20\nd2d_rx = 15,10; 25,20\ncell_users = 50,50\n"
      "[radio]\np_d2d = 10dBm, 20dBm\ngamma_min_d2d = -10dB\n"
      "[experiment]\nagents = random, oracle\nseeds = 4,5,6\n");
  EXPECT_EQ(cfg.scenario.topology.num_pairs(), 2);
  EXPECT_EQ(cfg.scenario.topology.reuse, Eigen::MatrixXi::Ones(2, 1));
  EXPECT_NEAR(cfg.scenario.radio.p_d2d[1], 0.1, 1e-15);
  EXPECT_EQ(cfg.scenario.radio.bw_d2d.size(), 2);
  EXPECT_EQ(cfg.agents, (std::vector<AgentKind>{AgentKind::random, AgentKind::oracle}));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 5, 6}));
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(error_of("[radio]\nbw_d2d = -1\n").find("radio.bw_d2d"), std::string::npos);
  EXPECT_NE(error_of("[train]\nlearning_speed = 3\n").find("train.learning_speed"), std::string::npos);
  EXPECT_NE(error_of("[warp]\nx = 1\n").find("warp"), std::string::npos);
  EXPECT_NE(error_of("[ris]\nnum_elements = many\n").find("ris.num_elements"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nagents = genius\n").find("genius"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/risd2d.ini"), ConfigError);
}

TEST(Config, HashTracksContent) {
  const auto a = parse_config("");
  const auto b = parse_config("[train]\ngamma = 0.9\n");
  const auto c = parse_config("[train]\ngamma = 0.8\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(SeededRng, StreamsAreReproducibleAndDistinct) {
  Rng a = seeded_rng(7, "env"), b = seeded_rng(7, "env");
  Rng c = seeded_rng(7, "agent"), d = seeded_rng(8, "env");
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Csv, Formatting) {
  CsvTable t{{"a", "b"}, {{"1", "x"}, {"2.5", "y"}}};
  EXPECT_EQ(t.str(), "a,b\n1,x\n2.5,y\n");
}

TEST(Experiments, ConvergenceRowCountsAndDeterminism) {
  const ExperimentConfig cfg = parse_config(tiny("agents = cnn_dqn, random\n"));
  const CsvTable t = run_convergence(cfg);
  EXPECT_EQ(t.header.size(), 8u);
  EXPECT_EQ(t.rows.size(), 2u * 2u * 40u);
  EXPECT_EQ(t.str(), run_convergence(cfg).str());
  EXPECT_THROW(run_convergence(parse_config(tiny("agents = oracle\n"))), ConfigError);
}

TEST(Experiments, PowerSweepRows) {
  const ExperimentConfig cfg =
      parse_config(tiny("agents = oracle\nsweep_variable = p_d2d_dbm\nsweep_values = 5, 25\n"));
  const CsvTable t = run_power_sweep(cfg);
  ASSERT_EQ(t.rows.size(), 2u * 2u * 2u);
  std::set<std::string> agents;
  for (const auto& r : t.rows) agents.insert(r[4]);
  EXPECT_EQ(agents, (std::set<std::string>{"oracle", "no_ris"}));
  EXPECT_THROW(run_power_sweep(parse_config(tiny(""))), ConfigError);
}

TEST(Experiments, ElementSweepRows) {
  const ExperimentConfig cfg = parse_config(tiny("sweep_variable = num_elements\nsweep_values = 1, 2\n"));
  const CsvTable t = run_element_sweep(cfg);
  ASSERT_EQ(t.rows.size(), 2u * 2u * 2u);
  EXPECT_EQ(t.rows[0][3], "oracle");
  EXPECT_EQ(t.rows[1][3], "random_phase");
  EXPECT_EQ(t.str(), run_element_sweep(cfg).str());
}

TEST(Experiments, OracleAndEvalRows) {
  const ExperimentConfig cfg = parse_config(tiny("agents = random, fc_dqn\n"));
  const CsvTable o = run_oracle(cfg);
  EXPECT_EQ(o.rows.size(), 2u);
  EXPECT_EQ(o.rows[0].back(), "200");
  const CsvTable e = run_eval(cfg);
  EXPECT_EQ(e.rows.size(), 4u);
  EXPECT_EQ(e.header.size(), 10u);
}
