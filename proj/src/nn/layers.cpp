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

#include "nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace ptts::nn {

Linear::Linear(ParameterStore& store, const std::string& name, int in, int out, Rng& rng,
               bool with_bias) {
  weight = store.create(name + ".weight", glorot(in, out, rng));
  if (with_bias) bias = store.create(name + ".bias", Matrix::Zero(1, out));
}

Tensor Linear::operator()(const Tensor& x) const {
  Tensor y = matmul(x, weight);
  return bias.defined() ? add(y, bias) : y;
}

LayerNorm::LayerNorm(ParameterStore& store, const std::string& name, int dim) {
  gamma = store.create(name + ".gamma", Matrix::Ones(1, dim));
  beta = store.create(name + ".beta", Matrix::Zero(1, dim));
}

Conv1d::Conv1d(ParameterStore& store, const std::string& name, int in, int out, int kernel_size,
               int dilation_factor, Rng& rng)
    : kernel(kernel_size), dilation(dilation_factor) {
  if (kernel_size % 2 == 0) throw std::invalid_argument("conv kernel must be odd: " + name);
  weight = store.create(name + ".weight", glorot(static_cast<Eigen::Index>(in) * kernel_size,
                                                 out, rng));
  bias = store.create(name + ".bias", Matrix::Zero(1, out));
}

DepthwiseConv1d::DepthwiseConv1d(ParameterStore& store, const std::string& name, int channels,
                                 int kernel_size, Rng& rng)
    : kernel(kernel_size) {
  if (kernel_size % 2 == 0) throw std::invalid_argument("conv kernel must be odd: " + name);
  weight = store.create(name + ".weight", glorot(kernel_size, channels, rng));
  bias = store.create(name + ".bias", Matrix::Zero(1, channels));
}

MultiHeadAttention::MultiHeadAttention(ParameterStore& store, const std::string& name, int dim,
                                       int num_heads, Rng& rng)
    : query(store, name + ".query", dim, dim, rng),
      key(store, name + ".key", dim, dim, rng),
      value(store, name + ".value", dim, dim, rng),
      output(store, name + ".output", dim, dim, rng),
      heads(num_heads) {
  if (num_heads < 1 || dim % num_heads != 0) {
    throw std::invalid_argument("attention width not divisible by heads: " + name);
  }
}

Tensor MultiHeadAttention::operator()(const Tensor& q_in, const Tensor& kv_in) const {
  const Tensor q = query(q_in);
  const Tensor k = key(kv_in);
  const Tensor v = value(kv_in);
  const Eigen::Index width = q.cols() / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(width));
  std::vector<Tensor> outs;
  outs.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    const Tensor qh = slice_cols(q, h * width, width);
    const Tensor kh = slice_cols(k, h * width, width);
    const Tensor vh = slice_cols(v, h * width, width);
    const Tensor scores = scale(matmul(qh, transpose(kh)), inv_sqrt);
    outs.push_back(matmul(softmax_rows(scores), vh));
  }
  const Tensor merged = heads == 1 ? outs.front() : concat_cols(outs);
  return output(merged);
}

FftBlock::FftBlock(ParameterStore& store, const std::string& name, int dim, int heads,
                   int ffn_dim, int ffn_kernel, Rng& rng)
    : attention(store, name + ".attention", dim, heads, rng),
      attention_norm(store, name + ".attention_norm", dim),
      ffn_in(store, name + ".ffn_in", dim, ffn_dim, ffn_kernel, 1, rng),
      ffn_out(store, name + ".ffn_out", ffn_dim, dim, 1, 1, rng),
      ffn_norm(store, name + ".ffn_norm", dim) {}

Tensor FftBlock::operator()(const Tensor& x) const {
  Tensor h = attention_norm(add(x, attention(x, x)));
  return ffn_norm(add(h, ffn_out(relu(ffn_in(h)))));
}

ConformerBlock::ConformerBlock(ParameterStore& store, const std::string& name, int dim, int heads,
                               int conv_kernel, Rng& rng)
    : ffn1_norm(store, name + ".ffn1_norm", dim),
      attention_norm(store, name + ".attention_norm", dim),
      conv_norm(store, name + ".conv_norm", dim),
      depthwise_norm(store, name + ".depthwise_norm", dim),
      ffn2_norm(store, name + ".ffn2_norm", dim),
      final_norm(store, name + ".final_norm", dim),
      ffn1_in(store, name + ".ffn1_in", dim, 4 * dim, rng),
      ffn1_out(store, name + ".ffn1_out", 4 * dim, dim, rng),
      ffn2_in(store, name + ".ffn2_in", dim, 4 * dim, rng),
      ffn2_out(store, name + ".ffn2_out", 4 * dim, dim, rng),
      attention(store, name + ".attention", dim, heads, rng),
      pointwise_in(store, name + ".pointwise_in", dim, 2 * dim, rng),
      pointwise_out(store, name + ".pointwise_out", dim, dim, rng),
      depthwise(store, name + ".depthwise", dim, conv_kernel, rng) {}

Tensor ConformerBlock::operator()(const Tensor& x) const {
  Tensor h = add(x, scale(ffn1_out(silu(ffn1_in(ffn1_norm(x)))), 0.5));
  const Tensor a = attention_norm(h);
  h = add(h, attention(a, a));

  const Tensor c = pointwise_in(conv_norm(h));
  const Eigen::Index dim = h.cols();
  const Tensor glu = mul(slice_cols(c, 0, dim), sigmoid(slice_cols(c, dim, dim)));
  h = add(h, pointwise_out(silu(depthwise_norm(depthwise(glu)))));

  h = add(h, scale(ffn2_out(silu(ffn2_in(ffn2_norm(h)))), 0.5));
  return final_norm(h);
}

ConvPredictorLayer::ConvPredictorLayer(ParameterStore& store, const std::string& name, int dim,
                                       int kernel, Rng& rng)
    : conv(store, name + ".conv", dim, dim, kernel, 1, rng), norm(store, name + ".norm", dim) {}

AttentionLayer::AttentionLayer(ParameterStore& store, const std::string& name, int dim, int heads,
                               Rng& rng)
    : attention(store, name + ".attention", dim, heads, rng), norm(store, name + ".norm", dim) {}

Matrix sinusoidal_positions(Eigen::Index length, int dim) {
  Matrix pe(length, dim);
  for (Eigen::Index pos = 0; pos < length; ++pos) {
    for (int i = 0; i < dim; ++i) {
      const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / dim);
      const double angle = static_cast<double>(pos) * rate;
      pe(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

Matrix sinusoidal_embedding(double position, int dim) {
  Matrix e(1, dim);
  const int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    const double rate = std::exp(-std::log(10000.0) * i / std::max(1, half - 1));
    e(0, i) = std::sin(position * rate);
    e(0, half + i) = std::cos(position * rate);
  }
  if (dim % 2 == 1) e(0, dim - 1) = 0.0;
  return e;
}

}  // namespace ptts::nn
