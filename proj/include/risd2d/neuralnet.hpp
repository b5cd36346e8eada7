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

// Small Q-network engine: an optional full-height 1-D convolution over a
// two-row input, flatten, one ReLU hidden layer and a linear output layer.
// Everything is templated on the scalar so gradient checks can run in double
// while training code is free to pick float.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace risd2d::nn {

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Input = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

struct ConvSpec {
  Index num_maps = 8;
  Index kernel_width = 3;
};

struct NetworkArch {
  Index columns = 0;  // U
  std::optional<ConvSpec> conv;
  Index hidden_units = 256;
  Index output_units = 0;

  bool has_conv() const { return conv.has_value(); }
  /// Valid-convolution output length U - mu + 1.
  Index conv_positions() const { return has_conv() ? columns - conv->kernel_width + 1 : 0; }
  /// Length of the vector fed to the hidden layer.
  Index feature_size() const { return has_conv() ? conv->num_maps * conv_positions() : 2 * columns; }

  void validate() const {
    if (columns < 1) throw std::invalid_argument("network: input needs at least one column");
    if (hidden_units < 1 || output_units < 1) throw std::invalid_argument("network: layer widths must be >= 1");
    if (has_conv()) {
      if (conv->num_maps < 1) throw std::invalid_argument("network: conv needs at least one feature map");
      if (conv->kernel_width < 1 || conv->kernel_width > columns) {
        throw std::invalid_argument("network: kernel width must lie in [1, U]");
      }
    }
  }

  bool operator==(const NetworkArch& o) const {
    const bool conv_eq = has_conv() == o.has_conv() &&
                         (!has_conv() || (conv->num_maps == o.conv->num_maps &&
                                          conv->kernel_width == o.conv->kernel_width));
    return conv_eq && columns == o.columns && hidden_units == o.hidden_units && output_units == o.output_units;
  }
};

inline NetworkArch cnn_arch(Index columns, Index outputs, ConvSpec conv = {}, Index hidden = 256) {
  return {columns, conv, hidden, outputs};
}

inline NetworkArch fc_arch(Index columns, Index outputs, Index hidden = 256) {
  return {columns, std::nullopt, hidden, outputs};
}

/// Layer-ordered parameter set. Also used to hold gradients.
///
/// Conv kernel lambda is row lambda of `conv_kernels`, laid out as the 2 x mu
/// kernel in row-major order: entry r * mu + j multiplies input(r, c + j).
template <typename Scalar>
struct QParams {
  Matrix<Scalar> conv_kernels;  // Lambda x 2mu
  Vector<Scalar> conv_bias;     // Lambda
  Matrix<Scalar> hidden_weights;  // hidden x nu
  Vector<Scalar> hidden_bias;
  Matrix<Scalar> output_weights;  // |A| x hidden
  Vector<Scalar> output_bias;

  static QParams zeros(const NetworkArch& arch) {
    QParams p;
    const Index maps = arch.has_conv() ? arch.conv->num_maps : 0;
    const Index width = arch.has_conv() ? 2 * arch.conv->kernel_width : 0;
    p.conv_kernels = Matrix<Scalar>::Zero(maps, width);
    p.conv_bias = Vector<Scalar>::Zero(maps);
    p.hidden_weights = Matrix<Scalar>::Zero(arch.hidden_units, arch.feature_size());
    p.hidden_bias = Vector<Scalar>::Zero(arch.hidden_units);
    p.output_weights = Matrix<Scalar>::Zero(arch.output_units, arch.hidden_units);
    p.output_bias = Vector<Scalar>::Zero(arch.output_units);
    return p;
  }

  /// Visits every tensor in checkpoint order.
  template <typename F>
  void for_each(F&& f) {
    f(conv_kernels);
    f(conv_bias);
    f(hidden_weights);
    f(hidden_bias);
    f(output_weights);
    f(output_bias);
  }
  template <typename F>
  void for_each(F&& f) const {
    f(conv_kernels);
    f(conv_bias);
    f(hidden_weights);
    f(hidden_bias);
    f(output_weights);
    f(output_bias);
  }

  Index size() const {
    Index n = 0;
    for_each([&](const auto& t) { n += t.size(); });
    return n;
  }

  /// Tensors flattened in checkpoint order, each row-major.
  Vector<Scalar> flatten() const {
    Vector<Scalar> out(size());
    Index offset = 0;
    for_each([&](const auto& t) {
      for (Index r = 0; r < t.rows(); ++r)
        for (Index c = 0; c < t.cols(); ++c) out[offset++] = t(r, c);
    });
    return out;
  }

  void assign(const Vector<Scalar>& flat) {
    if (flat.size() != size()) throw std::invalid_argument("QParams::assign: size mismatch");
    Index offset = 0;
    for_each([&](auto& t) {
      for (Index r = 0; r < t.rows(); ++r)
        for (Index c = 0; c < t.cols(); ++c) t(r, c) = flat[offset++];
    });
  }

  void set_zero() {
    for_each([](auto& t) { t.setZero(); });
  }

  /// this += scale * other
  void add_scaled(const QParams& other, Scalar scale) {
    conv_kernels += scale * other.conv_kernels;
    conv_bias += scale * other.conv_bias;
    hidden_weights += scale * other.hidden_weights;
    hidden_bias += scale * other.hidden_bias;
    output_weights += scale * other.output_weights;
    output_bias += scale * other.output_bias;
  }

  bool operator==(const QParams& o) const {
    return conv_kernels == o.conv_kernels && conv_bias == o.conv_bias && hidden_weights == o.hidden_weights &&
           hidden_bias == o.hidden_bias && output_weights == o.output_weights && output_bias == o.output_bias;
  }
};

template <typename Scalar>
using Gradients = QParams<Scalar>;

template <typename Scalar>
class QNetwork {
 public:
  using scalar_type = Scalar;

  QNetwork() = default;
  explicit QNetwork(NetworkArch arch) : arch_(arch) {
    arch_.validate();
    params_ = QParams<Scalar>::zeros(arch_);
  }

  const NetworkArch& arch() const { return arch_; }
  QParams<Scalar>& params() { return params_; }
  const QParams<Scalar>& params() const { return params_; }

  bool operator==(const QNetwork& o) const { return arch_ == o.arch_ && params_ == o.params_; }

 private:
  NetworkArch arch_;
  QParams<Scalar> params_;
};

/// Intermediate activations of one forward pass.
template <typename Scalar>
struct ForwardTrace {
  Matrix<Scalar> conv_pre;  // Lambda x (U - mu + 1), before ReLU
  Vector<Scalar> features;  // flattened conv output (or raw input for FC)
  Vector<Scalar> hidden_pre;
  Vector<Scalar> hidden;
  Vector<Scalar> q;
};

namespace detail {

template <typename Scalar>
void check_input(const NetworkArch& arch, const Input<Scalar>& input) {
  if (input.cols() != arch.columns) {
    throw std::invalid_argument("network: input has " + std::to_string(input.cols()) + " columns, expected " +
                                std::to_string(arch.columns));
  }
}

template <typename Scalar>
Matrix<Scalar> conv_preactivation(const QNetwork<Scalar>& net, const Input<Scalar>& input) {
  const NetworkArch& arch = net.arch();
  const Index mu = arch.conv->kernel_width;
  const Index positions = arch.conv_positions();
  // Sliding windows as columns: rows [0, mu) from input row 0, [mu, 2mu) from row 1.
  Matrix<Scalar> windows(2 * mu, positions);
  for (Index c = 0; c < positions; ++c) {
    windows.col(c).head(mu) = input.row(0).segment(c, mu).transpose();
    windows.col(c).tail(mu) = input.row(1).segment(c, mu).transpose();
  }
  Matrix<Scalar> pre = net.params().conv_kernels * windows;
  pre.colwise() += net.params().conv_bias;
  return pre;
}

}  // namespace detail

/// Feature maps after ReLU, Lambda x (U - mu + 1). Valid convolution, stride 1.
template <typename Scalar>
Matrix<Scalar> conv_forward(const QNetwork<Scalar>& net, const Input<Scalar>& input) {
  if (!net.arch().has_conv()) throw std::invalid_argument("conv_forward: network has no convolutional layer");
  detail::check_input(net.arch(), input);
  return detail::conv_preactivation(net, input).cwiseMax(Scalar(0));
}

template <typename Scalar>
ForwardTrace<Scalar> forward_trace(const QNetwork<Scalar>& net, const Input<Scalar>& input) {
  const NetworkArch& arch = net.arch();
  const QParams<Scalar>& p = net.params();
  detail::check_input(arch, input);
  ForwardTrace<Scalar> t;
  if (arch.has_conv()) {
    t.conv_pre = detail::conv_preactivation(net, input);
    const Matrix<Scalar> maps = t.conv_pre.cwiseMax(Scalar(0));
    // Map-major flatten: all positions of map 0, then map 1, ...
    t.features.resize(arch.feature_size());
    for (Index m = 0; m < maps.rows(); ++m) t.features.segment(m * maps.cols(), maps.cols()) = maps.row(m).transpose();
  } else {
    t.features.resize(arch.feature_size());
    t.features.head(arch.columns) = input.row(0).transpose();
    t.features.tail(arch.columns) = input.row(1).transpose();
  }
  t.hidden_pre = p.hidden_weights * t.features + p.hidden_bias;
  t.hidden = t.hidden_pre.cwiseMax(Scalar(0));
  t.q = p.output_weights * t.hidden + p.output_bias;
  return t;
}

template <typename Scalar>
Vector<Scalar> forward(const QNetwork<Scalar>& net, const Input<Scalar>& input) {
  return forward_trace(net, input).q;
}

/// Adds `weight` times the gradient of 0.5 * (target - Q(s, action))^2 to
/// `grads`. Only the selected output unit carries error. Returns the loss.
template <typename Scalar>
Scalar accumulate_gradient(const QNetwork<Scalar>& net, const Input<Scalar>& input, Index action, Scalar target,
                           Gradients<Scalar>& grads, Scalar weight = Scalar(1)) {
  const NetworkArch& arch = net.arch();
  const QParams<Scalar>& p = net.params();
  if (action < 0 || action >= arch.output_units) throw std::invalid_argument("backward: action index out of range");
  const ForwardTrace<Scalar> t = forward_trace(net, input);
  const Scalar residual = t.q[action] - target;  // dL/dQ_a
  const Scalar g = weight * residual;

  grads.output_weights.row(action) += g * t.hidden.transpose();
  grads.output_bias[action] += g;

  const Vector<Scalar> d_hidden =
      (g * p.output_weights.row(action).transpose()).cwiseProduct((t.hidden_pre.array() > Scalar(0)).template cast<Scalar>().matrix());
  grads.hidden_weights.noalias() += d_hidden * t.features.transpose();
  grads.hidden_bias += d_hidden;

  if (arch.has_conv()) {
    const Index mu = arch.conv->kernel_width;
    const Index positions = arch.conv_positions();
    const Vector<Scalar> d_features = p.hidden_weights.transpose() * d_hidden;
    for (Index m = 0; m < arch.conv->num_maps; ++m) {
      for (Index c = 0; c < positions; ++c) {
        if (!(t.conv_pre(m, c) > Scalar(0))) continue;
        const Scalar d = d_features[m * positions + c];
        grads.conv_bias[m] += d;
        grads.conv_kernels.row(m).head(mu) += d * input.row(0).segment(c, mu);
        grads.conv_kernels.row(m).tail(mu) += d * input.row(1).segment(c, mu);
      }
    }
  }
  return Scalar(0.5) * residual * residual;
}

template <typename Scalar>
Gradients<Scalar> backward(const QNetwork<Scalar>& net, const Input<Scalar>& input, Index action, Scalar target) {
  Gradients<Scalar> grads = Gradients<Scalar>::zeros(net.arch());
  accumulate_gradient(net, input, action, target, grads);
  return grads;
}

template <typename Scalar>
void sgd_step(QNetwork<Scalar>& net, const Gradients<Scalar>& grads, Scalar lr) {
  net.params().add_scaled(grads, -lr);
}

/// Glorot-uniform weights, zero biases.
template <typename Scalar, typename Engine>
void init_weights(QNetwork<Scalar>& net, Engine& rng) {
  auto glorot = [&](Matrix<Scalar>& w, Index fan_in, Index fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index r = 0; r < w.rows(); ++r)
      for (Index c = 0; c < w.cols(); ++c) w(r, c) = static_cast<Scalar>(dist(rng));
  };
  const NetworkArch& arch = net.arch();
  QParams<Scalar>& p = net.params();
  p.set_zero();
  if (arch.has_conv()) glorot(p.conv_kernels, 2 * arch.conv->kernel_width, arch.conv->num_maps);
  glorot(p.hidden_weights, arch.feature_size(), arch.hidden_units);
  glorot(p.output_weights, arch.hidden_units, arch.output_units);
}

struct LayerCount {
  std::string name;
  Index weights = 0;
  Index biases = 0;
};

struct ParamCount {
  std::vector<LayerCount> layers;
  Index total = 0;

  /// Weights of the layer that reads the state matrix.
  Index first_layer_weights() const { return layers.front().weights; }
  Index first_layer_biases() const { return layers.front().biases; }
};

inline ParamCount param_count(const NetworkArch& arch) {
  ParamCount out;
  if (arch.has_conv()) {
    out.layers.push_back({"conv", 2 * arch.conv->kernel_width * arch.conv->num_maps, arch.conv->num_maps});
  }
  out.layers.push_back({"hidden", arch.feature_size() * arch.hidden_units, arch.hidden_units});
  out.layers.push_back({"output", arch.hidden_units * arch.output_units, arch.output_units});
  for (const auto& l : out.layers) out.total += l.weights + l.biases;
  return out;
}

template <typename Scalar>
ParamCount param_count(const QNetwork<Scalar>& net) {
  return param_count(net.arch());
}

}  // namespace risd2d::nn
