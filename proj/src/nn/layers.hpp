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

#include "nn/autograd.hpp"
#include "nn/parameters.hpp"

#include <string>
#include <vector>

namespace ptts::nn {

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out, may be undefined

  Linear() = default;
  Linear(ParameterStore& store, const std::string& name, int in, int out, Rng& rng,
         bool with_bias = true);
  Tensor operator()(const Tensor& x) const;
};

struct LayerNorm {
  Tensor gamma;
  Tensor beta;

  LayerNorm() = default;
  LayerNorm(ParameterStore& store, const std::string& name, int dim);
  Tensor operator()(const Tensor& x) const { return layer_norm(x, gamma, beta); }
};

struct Conv1d {
  Tensor weight;
  Tensor bias;
  int kernel = 1;
  int dilation = 1;

  Conv1d() = default;
  Conv1d(ParameterStore& store, const std::string& name, int in, int out, int kernel_size,
         int dilation_factor, Rng& rng);
  Tensor operator()(const Tensor& x) const { return conv1d(x, weight, bias, kernel, dilation); }
};

struct DepthwiseConv1d {
  Tensor weight;
  Tensor bias;
  int kernel = 1;

  DepthwiseConv1d() = default;
  DepthwiseConv1d(ParameterStore& store, const std::string& name, int channels, int kernel_size,
                  Rng& rng);
  Tensor operator()(const Tensor& x) const {
    return depthwise_conv1d(x, weight, bias, kernel, 1);
  }
};

/// Scaled dot-product attention with `heads` heads of width dim / heads.
struct MultiHeadAttention {
  Linear query, key, value, output;
  int heads = 1;

  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore& store, const std::string& name, int dim, int num_heads,
                     Rng& rng);
  Tensor operator()(const Tensor& q_in, const Tensor& kv_in) const;
};

/// FastSpeech-style feed-forward transformer block (post-norm): self
/// attention then a two-layer convolutional feed-forward network.
struct FftBlock {
  MultiHeadAttention attention;
  LayerNorm attention_norm;
  Conv1d ffn_in, ffn_out;
  LayerNorm ffn_norm;

  FftBlock() = default;
  FftBlock(ParameterStore& store, const std::string& name, int dim, int heads, int ffn_dim,
           int ffn_kernel, Rng& rng);
  Tensor operator()(const Tensor& x) const;
};

/// Conformer layer: half-step FFN, self attention, convolution module
/// (pointwise + GLU, depthwise, swish, pointwise), half-step FFN, final norm.
struct ConformerBlock {
  LayerNorm ffn1_norm, attention_norm, conv_norm, depthwise_norm, ffn2_norm, final_norm;
  Linear ffn1_in, ffn1_out, ffn2_in, ffn2_out;
  MultiHeadAttention attention;
  Linear pointwise_in, pointwise_out;
  DepthwiseConv1d depthwise;

  ConformerBlock() = default;
  ConformerBlock(ParameterStore& store, const std::string& name, int dim, int heads,
                 int conv_kernel, Rng& rng);
  Tensor operator()(const Tensor& x) const;
};

/// The original convolution-only variance predictor layer:
/// conv (kernel 3) -> ReLU -> LayerNorm.
struct ConvPredictorLayer {
  Conv1d conv;
  LayerNorm norm;

  ConvPredictorLayer() = default;
  ConvPredictorLayer(ParameterStore& store, const std::string& name, int dim, int kernel,
                     Rng& rng);
  Tensor operator()(const Tensor& x) const { return norm(relu(conv(x))); }
};

/// Residual self-attention followed by LayerNorm.
struct AttentionLayer {
  MultiHeadAttention attention;
  LayerNorm norm;

  AttentionLayer() = default;
  AttentionLayer(ParameterStore& store, const std::string& name, int dim, int heads, Rng& rng);
  Tensor operator()(const Tensor& x) const { return norm(add(x, attention(x, x))); }
};

/// Sinusoidal position table (length x dim).
Matrix sinusoidal_positions(Eigen::Index length, int dim);

/// Sinusoidal embedding of a scalar (e.g. a diffusion step), 1 x dim.
Matrix sinusoidal_embedding(double position, int dim);

}  // namespace ptts::nn
