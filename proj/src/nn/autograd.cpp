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

#include "nn/autograd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ptts::nn {

namespace {

thread_local bool g_grad_enabled = true;

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(std::string("autograd: ") + what);
}

// Builds the result node; parents and the backward closure are only kept when
// a gradient can flow.
Tensor make_result(Matrix value, std::vector<Tensor> inputs, std::function<void(Node&)> fn) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  bool needs = false;
  if (g_grad_enabled) {
    for (const Tensor& t : inputs) {
      if (t.defined() && t.requires_grad()) needs = true;
    }
  }
  if (needs) {
    node->requires_grad = true;
    for (Tensor& t : inputs) {
      if (t.defined()) node->parents.push_back(t.node());
    }
    node->backward_fn = std::move(fn);
  }
  return Tensor(std::move(node));
}

inline void push_grad(const Tensor& t, const Matrix& g) {
  if (t.defined() && t.requires_grad()) t.node()->accumulate(g);
}

double sigmoid_scalar(double x) {
  if (x >= 0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

double softplus_scalar(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

}  // namespace

void Node::accumulate(const Matrix& g) {
  if (grad.size() == 0) {
    grad = g;
  } else {
    grad += g;
  }
}

Tensor constant(Matrix value) { return leaf(std::move(value), false); }

Tensor leaf(Matrix value, bool requires_grad) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

void backward(const Tensor& loss) {
  require(loss.defined(), "backward on undefined tensor");
  require(loss.rows() == 1 && loss.cols() == 1, "backward expects a scalar loss");
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  visited.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  loss.node()->accumulate(Matrix::Ones(1, 1));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->backward_fn && node->grad.size() != 0) node->backward_fn(*node);
  }
  // Interior gradients are no longer needed; leaves keep theirs.
  for (Node* node : order) {
    if (node->backward_fn) node->grad.resize(0, 0);
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require(a.cols() == b.rows(), "matmul shape mismatch");
  Matrix v = a.value() * b.value();
  return make_result(std::move(v), {a, b}, [a, b](Node& self) {
    if (a.requires_grad()) push_grad(a, self.grad * b.value().transpose());
    if (b.requires_grad()) push_grad(b, a.value().transpose() * self.grad);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  const bool same = a.rows() == b.rows() && a.cols() == b.cols();
  const bool row_broadcast = b.rows() == 1 && a.cols() == b.cols();
  require(same || row_broadcast, "add shape mismatch");
  Matrix v;
  if (same) {
    v = a.value() + b.value();
  } else {
    v = a.value().rowwise() + b.value().row(0);
  }
  return make_result(std::move(v), {a, b}, [a, b, same](Node& self) {
    push_grad(a, self.grad);
    if (b.requires_grad()) {
      if (same) {
        push_grad(b, self.grad);
      } else {
        push_grad(b, self.grad.colwise().sum());
      }
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "sub shape mismatch");
  Matrix v = a.value() - b.value();
  return make_result(std::move(v), {a, b}, [a, b](Node& self) {
    push_grad(a, self.grad);
    if (b.requires_grad()) push_grad(b, -self.grad);
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  const bool same = a.rows() == b.rows() && a.cols() == b.cols();
  const bool row_broadcast = b.rows() == 1 && a.cols() == b.cols();
  require(same || row_broadcast, "mul shape mismatch");
  Matrix v;
  if (same) {
    v = a.value().cwiseProduct(b.value());
  } else {
    v = a.value().array().rowwise() * b.value().row(0).array();
  }
  return make_result(std::move(v), {a, b}, [a, b, same](Node& self) {
    if (same) {
      if (a.requires_grad()) push_grad(a, self.grad.cwiseProduct(b.value()));
      if (b.requires_grad()) push_grad(b, self.grad.cwiseProduct(a.value()));
    } else {
      if (a.requires_grad()) {
        Matrix g = self.grad.array().rowwise() * b.value().row(0).array();
        push_grad(a, g);
      }
      if (b.requires_grad()) push_grad(b, self.grad.cwiseProduct(a.value()).colwise().sum());
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  Matrix v = a.value() * s;
  return make_result(std::move(v), {a}, [a, s](Node& self) { push_grad(a, self.grad * s); });
}

Tensor transpose(const Tensor& a) {
  Matrix v = a.value().transpose();
  return make_result(std::move(v), {a},
                     [a](Node& self) { push_grad(a, self.grad.transpose()); });
}

Tensor relu(const Tensor& a) {
  Matrix v = a.value().cwiseMax(0.0);
  return make_result(std::move(v), {a}, [a](Node& self) {
    Matrix g = (a.value().array() > 0.0).select(self.grad, 0.0);
    push_grad(a, g);
  });
}

Tensor silu(const Tensor& a) {
  Matrix s = a.value().unaryExpr([](double x) { return sigmoid_scalar(x); });
  Matrix v = a.value().cwiseProduct(s);
  return make_result(std::move(v), {a}, [a, s](Node& self) {
    Matrix d = s.array() * (1.0 + a.value().array() * (1.0 - s.array()));
    push_grad(a, self.grad.cwiseProduct(d));
  });
}

Tensor sigmoid(const Tensor& a) {
  Matrix v = a.value().unaryExpr([](double x) { return sigmoid_scalar(x); });
  Matrix s = v;
  return make_result(std::move(v), {a}, [a, s](Node& self) {
    Matrix d = s.array() * (1.0 - s.array());
    push_grad(a, self.grad.cwiseProduct(d));
  });
}

Tensor tanh(const Tensor& a) {
  Matrix v = a.value().array().tanh();
  Matrix t = v;
  return make_result(std::move(v), {a}, [a, t](Node& self) {
    Matrix d = 1.0 - t.array().square();
    push_grad(a, self.grad.cwiseProduct(d));
  });
}

Tensor softplus(const Tensor& a) {
  Matrix v = a.value().unaryExpr([](double x) { return softplus_scalar(x); });
  return make_result(std::move(v), {a}, [a](Node& self) {
    Matrix d = a.value().unaryExpr([](double x) { return sigmoid_scalar(x); });
    push_grad(a, self.grad.cwiseProduct(d));
  });
}

Tensor exp(const Tensor& a) {
  Matrix v = a.value().array().exp();
  Matrix e = v;
  return make_result(std::move(v), {a},
                     [a, e](Node& self) { push_grad(a, self.grad.cwiseProduct(e)); });
}

Tensor softmax_rows(const Tensor& a) {
  Matrix v(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    const double m = a.value().row(r).maxCoeff();
    auto e = (a.value().row(r).array() - m).exp();
    v.row(r) = e / e.sum();
  }
  Matrix s = v;
  return make_result(std::move(v), {a}, [a, s](Node& self) {
    Matrix g(s.rows(), s.cols());
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      const double dot = self.grad.row(r).dot(s.row(r));
      g.row(r) = s.row(r).array() * (self.grad.row(r).array() - dot);
    }
    push_grad(a, g);
  });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  require(gamma.rows() == 1 && gamma.cols() == x.cols(), "layer_norm gamma shape");
  require(beta.rows() == 1 && beta.cols() == x.cols(), "layer_norm beta shape");
  const Eigen::Index n = x.rows();
  const Eigen::Index c = x.cols();
  Matrix xhat(n, c);
  Eigen::VectorXd inv_std(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double mean = x.value().row(r).mean();
    const double var = (x.value().row(r).array() - mean).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (x.value().row(r).array() - mean) * inv_std(r);
  }
  Matrix v = (xhat.array().rowwise() * gamma.value().row(0).array()).rowwise() +
             beta.value().row(0).array();
  return make_result(std::move(v), {x, gamma, beta}, [x, gamma, beta, xhat, inv_std](Node& self) {
    const Matrix& g = self.grad;
    if (gamma.requires_grad()) push_grad(gamma, g.cwiseProduct(xhat).colwise().sum());
    if (beta.requires_grad()) push_grad(beta, g.colwise().sum());
    if (x.requires_grad()) {
      const double cols = static_cast<double>(xhat.cols());
      Matrix gx(g.rows(), g.cols());
      for (Eigen::Index r = 0; r < g.rows(); ++r) {
        RowVector gh = g.row(r).array() * gamma.value().row(0).array();
        const double mean_gh = gh.mean();
        const double mean_ghx = gh.dot(xhat.row(r)) / cols;
        gx.row(r) = inv_std(r) * (gh.array() - mean_gh - xhat.row(r).array() * mean_ghx);
      }
      push_grad(x, gx);
    }
  });
}

Tensor conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias, int kernel, int dilation) {
  require(kernel >= 1 && dilation >= 1, "conv1d kernel/dilation");
  const Eigen::Index t_len = x.rows();
  const Eigen::Index cin = x.cols();
  require(weight.rows() == kernel * cin, "conv1d weight rows");
  const Eigen::Index cout = weight.cols();
  if (bias.defined()) require(bias.rows() == 1 && bias.cols() == cout, "conv1d bias shape");
  const int half = (kernel - 1) / 2;

  Matrix cols = Matrix::Zero(t_len, kernel * cin);
  for (int k = 0; k < kernel; ++k) {
    const Eigen::Index shift = static_cast<Eigen::Index>(k - half) * dilation;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      const Eigen::Index src = t + shift;
      if (src >= 0 && src < t_len) cols.block(t, k * cin, 1, cin) = x.value().row(src);
    }
  }
  Matrix v = cols * weight.value();
  if (bias.defined()) v.rowwise() += bias.value().row(0);
  return make_result(std::move(v), {x, weight, bias},
                     [x, weight, bias, cols, kernel, dilation, half](Node& self) {
                       const Matrix& g = self.grad;
                       if (weight.requires_grad()) push_grad(weight, cols.transpose() * g);
                       if (bias.defined() && bias.requires_grad()) {
                         push_grad(bias, g.colwise().sum());
                       }
                       if (x.requires_grad()) {
                         const Eigen::Index t_len = x.rows();
                         const Eigen::Index cin = x.cols();
                         Matrix gcols = g * weight.value().transpose();
                         Matrix gx = Matrix::Zero(t_len, cin);
                         for (int k = 0; k < kernel; ++k) {
                           const Eigen::Index shift = static_cast<Eigen::Index>(k - half) * dilation;
                           for (Eigen::Index t = 0; t < t_len; ++t) {
                             const Eigen::Index src = t + shift;
                             if (src >= 0 && src < t_len) {
                               gx.row(src) += gcols.block(t, k * cin, 1, cin);
                             }
                           }
                         }
                         push_grad(x, gx);
                       }
                     });
}

Tensor depthwise_conv1d(const Tensor& x, const Tensor& weight, const Tensor& bias, int kernel,
                        int dilation) {
  require(weight.rows() == kernel && weight.cols() == x.cols(), "depthwise weight shape");
  const Eigen::Index t_len = x.rows();
  const int half = (kernel - 1) / 2;
  Matrix v = Matrix::Zero(t_len, x.cols());
  for (int k = 0; k < kernel; ++k) {
    const Eigen::Index shift = static_cast<Eigen::Index>(k - half) * dilation;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      const Eigen::Index src = t + shift;
      if (src >= 0 && src < t_len) {
        v.row(t) += x.value().row(src).cwiseProduct(weight.value().row(k));
      }
    }
  }
  if (bias.defined()) v.rowwise() += bias.value().row(0);
  return make_result(std::move(v), {x, weight, bias}, [x, weight, bias, kernel, dilation,
                                                       half](Node& self) {
    const Matrix& g = self.grad;
    const Eigen::Index t_len = x.rows();
    Matrix gw = Matrix::Zero(weight.rows(), weight.cols());
    Matrix gx = Matrix::Zero(t_len, x.cols());
    for (int k = 0; k < kernel; ++k) {
      const Eigen::Index shift = static_cast<Eigen::Index>(k - half) * dilation;
      for (Eigen::Index t = 0; t < t_len; ++t) {
        const Eigen::Index src = t + shift;
        if (src >= 0 && src < t_len) {
          gw.row(k) += g.row(t).cwiseProduct(x.value().row(src));
          gx.row(src) += g.row(t).cwiseProduct(weight.value().row(k));
        }
      }
    }
    if (weight.requires_grad()) push_grad(weight, gw);
    if (x.requires_grad()) push_grad(x, gx);
    if (bias.defined() && bias.requires_grad()) push_grad(bias, g.colwise().sum());
  });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  require(!parts.empty(), "concat_cols of nothing");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index total = 0;
  for (const Tensor& p : parts) {
    require(p.rows() == rows, "concat_cols row mismatch");
    total += p.cols();
  }
  Matrix v(rows, total);
  Eigen::Index off = 0;
  for (const Tensor& p : parts) {
    v.middleCols(off, p.cols()) = p.value();
    off += p.cols();
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return make_result(std::move(v), inputs, [inputs](Node& self) {
    Eigen::Index off = 0;
    for (const Tensor& p : inputs) {
      if (p.requires_grad()) push_grad(p, self.grad.middleCols(off, p.cols()));
      off += p.cols();
    }
  });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  require(!parts.empty(), "concat_rows of nothing");
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index total = 0;
  for (const Tensor& p : parts) {
    require(p.cols() == cols, "concat_rows col mismatch");
    total += p.rows();
  }
  Matrix v(total, cols);
  Eigen::Index off = 0;
  for (const Tensor& p : parts) {
    v.middleRows(off, p.rows()) = p.value();
    off += p.rows();
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  return make_result(std::move(v), inputs, [inputs](Node& self) {
    Eigen::Index off = 0;
    for (const Tensor& p : inputs) {
      if (p.requires_grad()) push_grad(p, self.grad.middleRows(off, p.rows()));
      off += p.rows();
    }
  });
}

Tensor slice_cols(const Tensor& a, Eigen::Index start, Eigen::Index count) {
  require(start >= 0 && count >= 0 && start + count <= a.cols(), "slice_cols range");
  Matrix v = a.value().middleCols(start, count);
  return make_result(std::move(v), {a}, [a, start, count](Node& self) {
    Matrix g = Matrix::Zero(a.rows(), a.cols());
    g.middleCols(start, count) = self.grad;
    push_grad(a, g);
  });
}

Tensor slice_rows(const Tensor& a, Eigen::Index start, Eigen::Index count) {
  require(start >= 0 && count >= 0 && start + count <= a.rows(), "slice_rows range");
  Matrix v = a.value().middleRows(start, count);
  return make_result(std::move(v), {a}, [a, start, count](Node& self) {
    Matrix g = Matrix::Zero(a.rows(), a.cols());
    g.middleRows(start, count) = self.grad;
    push_grad(a, g);
  });
}

Tensor repeat_rows(const Tensor& a, std::span<const int> counts) {
  require(static_cast<Eigen::Index>(counts.size()) == a.rows(), "repeat_rows count size");
  Eigen::Index total = 0;
  for (int c : counts) {
    require(c >= 0, "repeat_rows negative count");
    total += c;
  }
  Matrix v(total, a.cols());
  std::vector<Eigen::Index> source(static_cast<std::size_t>(total));
  Eigen::Index out = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (int r = 0; r < counts[i]; ++r) {
      v.row(out) = a.value().row(static_cast<Eigen::Index>(i));
      source[static_cast<std::size_t>(out)] = static_cast<Eigen::Index>(i);
      ++out;
    }
  }
  return make_result(std::move(v), {a}, [a, source](Node& self) {
    Matrix g = Matrix::Zero(a.rows(), a.cols());
    for (std::size_t r = 0; r < source.size(); ++r) {
      g.row(source[r]) += self.grad.row(static_cast<Eigen::Index>(r));
    }
    push_grad(a, g);
  });
}

Tensor broadcast_rows(const Tensor& row, Eigen::Index rows) {
  require(row.rows() == 1, "broadcast_rows expects a row");
  Matrix v = row.value().replicate(rows, 1);
  return make_result(std::move(v), {row},
                     [row](Node& self) { push_grad(row, self.grad.colwise().sum()); });
}

Tensor mean_rows(const Tensor& a) {
  require(a.rows() >= 1, "mean_rows of empty");
  Matrix v = a.value().colwise().mean();
  return make_result(std::move(v), {a}, [a](Node& self) {
    Matrix g = self.grad.replicate(a.rows(), 1) / static_cast<double>(a.rows());
    push_grad(a, g);
  });
}

Tensor gather_rows(const Tensor& table, std::span<const int> ids) {
  Matrix v(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    require(ids[i] >= 0 && ids[i] < table.rows(), "gather_rows id out of range");
    v.row(static_cast<Eigen::Index>(i)) = table.value().row(ids[i]);
  }
  std::vector<int> idx(ids.begin(), ids.end());
  return make_result(std::move(v), {table}, [table, idx](Node& self) {
    Matrix g = Matrix::Zero(table.rows(), table.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      g.row(idx[i]) += self.grad.row(static_cast<Eigen::Index>(i));
    }
    push_grad(table, g);
  });
}

Tensor sum_all(const Tensor& a) {
  Matrix v(1, 1);
  v(0, 0) = a.value().sum();
  return make_result(std::move(v), {a}, [a](Node& self) {
    push_grad(a, Matrix::Constant(a.rows(), a.cols(), self.grad(0, 0)));
  });
}

Tensor masked_l1(const Tensor& pred, const Matrix& target, const std::vector<bool>& mask) {
  require(pred.rows() == target.rows() && pred.cols() == target.cols(), "masked_l1 shape");
  require(static_cast<Eigen::Index>(mask.size()) == pred.rows(), "masked_l1 mask length");
  std::size_t count = 0;
  double total = 0.0;
  for (Eigen::Index r = 0; r < pred.rows(); ++r) {
    if (!mask[static_cast<std::size_t>(r)]) continue;
    ++count;
    total += (pred.value().row(r) - target.row(r)).cwiseAbs().sum();
  }
  const double denom = static_cast<double>(count) * static_cast<double>(pred.cols());
  Matrix v(1, 1);
  v(0, 0) = count == 0 ? 0.0 : total / denom;
  std::vector<bool> m = mask;
  return make_result(std::move(v), {pred}, [pred, target, m, denom, count](Node& self) {
    Matrix g = Matrix::Zero(pred.rows(), pred.cols());
    if (count > 0) {
      const double s = self.grad(0, 0) / denom;
      for (Eigen::Index r = 0; r < pred.rows(); ++r) {
        if (!m[static_cast<std::size_t>(r)]) continue;
        for (Eigen::Index c = 0; c < pred.cols(); ++c) {
          const double d = pred.value()(r, c) - target(r, c);
          g(r, c) = d > 0 ? s : (d < 0 ? -s : 0.0);
        }
      }
    }
    push_grad(pred, g);
  });
}

Tensor mse(const Tensor& pred, const Matrix& target) {
  require(pred.rows() == target.rows() && pred.cols() == target.cols(), "mse shape");
  const double n = static_cast<double>(pred.value().size());
  Matrix diff = pred.value() - target;
  Matrix v(1, 1);
  v(0, 0) = diff.squaredNorm() / n;
  return make_result(std::move(v), {pred}, [pred, diff, n](Node& self) {
    push_grad(pred, diff * (2.0 * self.grad(0, 0) / n));
  });
}

}  // namespace ptts::nn
