// Copyright 2026 The prompttts Authors
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

// Minimal reverse-mode automatic differentiation over row-major double
// matrices. Every tensor is two-dimensional: sequences are laid out as
// (time x channels). Graphs are built eagerly and released when the last
// Tensor handle referencing them goes away.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ptts::nn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor>;

struct Node {
  Matrix value;
  Matrix grad;  // empty until the first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  void accumulate(const Matrix& g);
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  const Matrix& grad() const { return node_->grad; }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  Eigen::Index rows() const { return node_->value.rows(); }
  Eigen::Index cols() const { return node_->value.cols(); }
  bool defined() const { return static_cast<bool>(node_); }
  double item() const { return node_->value(0, 0); }

  void zero_grad() { node_->grad.resize(0, 0); }

  const std::shared_ptr<Node>& node() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

/// Leaf holding a fixed value.
Tensor constant(Matrix value);
/// Leaf that collects gradients.
Tensor leaf(Matrix value, bool requires_grad);

/// Seeds d(loss)/d(loss) = 1 and propagates to every reachable leaf.
void backward(const Tensor& loss);

bool grad_enabled();

/// Disables graph recording within its scope (inference).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Arithmetic. `add` and `mul` broadcast a 1 x C right operand over rows.
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor transpose(const Tensor& a);

// Elementwise nonlinearities.
Tensor relu(const Tensor& a);
Tensor silu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor softplus(const Tensor& a);
Tensor exp(const Tensor& a);

Tensor softmax_rows(const Tensor& a);
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = 1e-5);

/// "Same"-padded temporal convolution. x: T x Cin, weight: (K*Cin) x Cout
/// with tap k occupying rows [k*Cin, (k+1)*Cin). bias may be undefined.
Tensor conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias, int kernel, int dilation);
/// Per-channel temporal convolution. weight: K x C.
Tensor depthwise_conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias, int kernel,
                        int dilation);

// Shape manipulation.
Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_rows(std::span<const Tensor> parts);
Tensor slice_cols(const Tensor& a, Eigen::Index start, Eigen::Index count);
Tensor slice_rows(const Tensor& a, Eigen::Index start, Eigen::Index count);
/// Row i of `a` repeated counts[i] times (counts may be zero).
Tensor repeat_rows(const Tensor& a, std::span<const int> counts);
Tensor broadcast_rows(const Tensor& row, Eigen::Index rows);
Tensor mean_rows(const Tensor& a);
Tensor gather_rows(const Tensor& table, std::span<const int> ids);

// Reductions to 1 x 1.
Tensor sum_all(const Tensor& a);
/// Mean |pred - target| over positions where mask is true; 0 when none are.
Tensor masked_l1(const Tensor& pred, const Matrix& target, const std::vector<bool>& mask);
Tensor mse(const Tensor& pred, const Matrix& target);

}  // namespace ptts::nn
