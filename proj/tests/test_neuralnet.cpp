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

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "risd2d/checkpoint.hpp"
#include "risd2d/neuralnet.hpp"

using namespace risd2d;
using namespace risd2d::nn;
using risd2d::reference::gradient_check;
using risd2d::reference::naive_conv;

namespace {

Input<double> random_input(Index cols, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Input<double> x(2, cols);
  for (Index c = 0; c < cols; ++c) {
    x(0, c) = u(rng);
    x(1, c) = u(rng);
  }
  return x;
}

void randomize(QNetwork<double>& net, Rng& rng) {
  std::normal_distribution<double> g(0.0, 0.5);
  net.params().for_each([&](auto& block) {
    for (Index i = 0; i < block.size(); ++i) block.data()[i] = g(rng);
  });
}

}  // namespace

TEST(Conv, AllOnesExample) {
  QNetwork<double> net(cnn_arch(4, 1, {1, 2}, 3));
  net.params().conv_kernels.setOnes();
  const Matrix<double> out = conv_forward(net, Input<double>(Input<double>::Ones(2, 4)));
  ASSERT_EQ(out.rows(), 1);
  ASSERT_EQ(out.cols(), 3);
  for (Index c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(out(0, c), 4.0);
}

TEST(Conv, NegativeBiasClampsToZero) {
  QNetwork<double> net(cnn_arch(6, 1, {2, 3}, 3));
  net.params().conv_bias.setConstant(-1.0);
  EXPECT_TRUE(conv_forward(net, Input<double>(Input<double>::Ones(2, 6))).isZero(0.0));
}

TEST(Conv, MatchesNaiveLoops) {
  Rng rng(3);
  for (int mu = 1; mu <= 5; ++mu) {
    QNetwork<double> net(cnn_arch(9, 4, {5, mu}, 7));
    randomize(net, rng);
    const Input<double> x = random_input(9, rng);
    const Matrix<double> got = conv_forward(net, x);
    const Eigen::MatrixXd expect = naive_conv(x, net.params().conv_kernels, net.params().conv_bias, mu);
    EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-13) << "mu " << mu;
  }
}

TEST(Conv, ShapeMismatchThrows) {
  QNetwork<double> net(cnn_arch(6, 2));
  EXPECT_THROW(conv_forward(net, Input<double>(Input<double>::Ones(2, 5))), std::invalid_argument);
  EXPECT_THROW(forward(net, Input<double>(Input<double>::Ones(2, 7))), std::invalid_argument);
  QNetwork<double> fc(fc_arch(6, 2));
  EXPECT_THROW(conv_forward(fc, Input<double>(Input<double>::Ones(2, 6))), std::invalid_argument);
}

TEST(Forward, ZeroParamsGiveZeroOutput) {
  QNetwork<double> net(cnn_arch(10, 17));
  Rng rng(1);
  EXPECT_TRUE(forward(net, random_input(10, rng)).isZero(0.0));
}

TEST(Forward, FullyConnectedAffineMap) {
  // One hidden unit reading only input(1, 0); output = 3 * relu(2 * x + 0.5) - 1.
  QNetwork<double> net(fc_arch(2, 1, 1));
  auto& p = net.params();
  p.hidden_weights(0, 2) = 2.0;
  p.hidden_bias[0] = 0.5;
  p.output_weights(0, 0) = 3.0;
  p.output_bias[0] = -1.0;
  Input<double> x = Input<double>::Zero(2, 2);
  x(1, 0) = 1.25;
  x(0, 0) = 9.0;
  EXPECT_DOUBLE_EQ(forward(net, x)[0], 3.0 * (2.0 * 1.25 + 0.5) - 1.0);
  x(1, 0) = -10;
  EXPECT_DOUBLE_EQ(forward(net, x)[0], -1.0);
}

TEST(Forward, FiniteAndPure) {
  Rng rng(8);
  QNetwork<double> net(cnn_arch(16, 33));
  init_weights(net, rng);
  const Input<double> x = random_input(16, rng);
  const auto a = forward(net, x);
  EXPECT_TRUE(a.allFinite());
  EXPECT_EQ(a, forward(net, x));
}

TEST(Forward, AffineInOutputWeights) {
  Rng rng(12);
  QNetwork<double> net(fc_arch(5, 4, 6));
  init_weights(net, rng);
  const Input<double> x = random_input(5, rng);
  QNetwork<double> a = net, b = net, mix = net;
  randomize(a, rng);
  b.params().output_weights = a.params().output_weights * -0.3 + Matrix<double>::Ones(4, 6);
  a.params().hidden_weights = net.params().hidden_weights;
  a.params().hidden_bias = net.params().hidden_bias;
  a.params().output_bias = net.params().output_bias;
  mix.params().output_weights = 0.25 * a.params().output_weights + 0.75 * b.params().output_weights;
  EXPECT_LT((forward(mix, x) - (0.25 * forward(a, x) + 0.75 * forward(b, x))).norm(), 1e-12);
}

TEST(Backward, MatchesFiniteDifferences) {
  Rng rng(2024);
  for (int trial = 0; trial < 4; ++trial) {
    QNetwork<double> cnn(cnn_arch(12, 5, {4, 3}, 16));
    QNetwork<double> fc(fc_arch(12, 5, 16));
    randomize(cnn, rng);
    randomize(fc, rng);
    const Input<double> x = random_input(12, rng);
    EXPECT_LT(gradient_check(cnn, x, trial, 1.5, 1e-6, 1e-6), 1e-4);
    EXPECT_LT(gradient_check(fc, x, trial, -0.7, 1e-6, 1e-6), 1e-4);
  }
}

TEST(Backward, ZeroResidualGivesZeroGradient) {
  Rng rng(5);
  QNetwork<double> net(cnn_arch(8, 3, {2, 3}, 5));
  randomize(net, rng);
  const Input<double> x = random_input(8, rng);
  const double q = forward(net, x)[1];
  EXPECT_TRUE(backward(net, x, 1, q).flatten().isZero(0.0));
}

TEST(Backward, OnlySelectedUnitCarriesError) {
  Rng rng(6);
  QNetwork<double> net(fc_arch(4, 5, 7));
  randomize(net, rng);
  const auto g = backward(net, random_input(4, rng), 2, 10.0);
  for (Index a = 0; a < 5; ++a) {
    if (a == 2) continue;
    EXPECT_TRUE(g.output_weights.row(a).isZero(0.0));
    EXPECT_EQ(g.output_bias[a], 0.0);
  }
  EXPECT_FALSE(g.output_weights.row(2).isZero(0.0));
  EXPECT_THROW(backward(net, random_input(4, rng), 5, 1.0), std::invalid_argument);
}

TEST(Sgd, ScalarStepAndZeroRate) {
  QNetwork<double> net(fc_arch(1, 1, 1));
  net.params().output_bias[0] = 1.0;
  auto grads = Gradients<double>::zeros(net.arch());
  grads.output_bias[0] = 2.0;
  const auto before = net.params();
  sgd_step(net, grads, 0.0);
  EXPECT_EQ(net.params(), before);
  sgd_step(net, grads, 0.1);
  EXPECT_DOUBLE_EQ(net.params().output_bias[0], 0.8);
}

TEST(Sgd, ConvergesOnQuadratic) {
  // With zero weights Q is the output bias, so the loss is 0.5 (t - b)^2.
  QNetwork<double> net(fc_arch(3, 2, 4));
  const Input<double> x = Input<double>::Ones(2, 3);
  for (int i = 0; i < 200; ++i) sgd_step(net, backward(net, x, 1, 4.2), 0.1);
  EXPECT_NEAR(net.params().output_bias[1], 4.2, 1e-8);
  EXPECT_EQ(net.params().output_bias[0], 0.0);
}

TEST(Init, DeterministicGlorotZeroBias) {
  const NetworkArch arch = cnn_arch(16, 825);
  QNetwork<double> a(arch), b(arch);
  Rng ra(77), rb(77);
  init_weights(a, ra);
  init_weights(b, rb);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.params().conv_bias.isZero(0.0));
  EXPECT_TRUE(a.params().hidden_bias.isZero(0.0));
  EXPECT_TRUE(a.params().output_bias.isZero(0.0));
  const auto& w = a.params().output_weights;
  const double limit = std::sqrt(6.0 / (256 + 825));
  EXPECT_LE(w.cwiseAbs().maxCoeff(), limit);
  const double mean = w.mean();
  const double se = limit / std::sqrt(3.0) / std::sqrt(static_cast<double>(w.size()));
  EXPECT_LE(std::abs(mean), 3 * se);
  const double kernel_limit = std::sqrt(6.0 / (6 + 8));
  EXPECT_LE(a.params().conv_kernels.cwiseAbs().maxCoeff(), kernel_limit);
}

TEST(ParamCount, FirstLayer) {
  const auto cnn = param_count(cnn_arch(16, 825, {8, 3}));
  EXPECT_EQ(cnn.first_layer_weights(), 48);
  EXPECT_EQ(cnn.first_layer_biases(), 8);
  const auto fc = param_count(fc_arch(16, 825, 256));
  EXPECT_EQ(fc.first_layer_weights(), 8192);
  EXPECT_LT(cnn.first_layer_weights(), fc.first_layer_weights());
  QNetwork<double> net(cnn_arch(16, 825));
  EXPECT_EQ(param_count(net).total, net.params().size());
  EXPECT_EQ(param_count(cnn_arch(40, 9)).first_layer_weights(), 48);
}

TEST(Checkpoint, RoundTrip) {
  Rng rng(9);
  for (const NetworkArch& arch : {cnn_arch(10, 225, {8, 3}, 32), fc_arch(10, 225, 32)}) {
    QNetwork<double> net(arch);
    init_weights(net, rng);
    net.params().output_bias[3] = 0.125;
    std::stringstream buf;
    write_checkpoint(buf, net);
    EXPECT_EQ(read_checkpoint(buf), net);
  }
}

TEST(Checkpoint, RejectsGarbage) {
  std::stringstream buf("not a checkpoint at all");
  EXPECT_THROW(read_checkpoint(buf), std::runtime_error);
}
