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

#include "model/model_config.hpp"
#include "nn/layers.hpp"

#include <vector>

namespace ptts::model {

using nn::Matrix;
using nn::Tensor;

/// Linear beta schedule and the closed-form quantities derived from it.
/// Steps are numbered 1..K; index k-1 holds step k.
class DiffusionSchedule {
 public:
  DiffusionSchedule() = default;
  DiffusionSchedule(int steps, double beta_start, double beta_end);

  int steps() const { return static_cast<int>(beta_.size()); }
  double beta(int t) const { return beta_.at(t - 1); }
  double alpha_bar(int t) const { return alpha_bar_.at(t - 1); }
  /// alpha_bar(0) is 1 by convention.
  double alpha_bar_prev(int t) const { return t <= 1 ? 1.0 : alpha_bar_.at(t - 2); }
  /// Variance of q(x_{t-1} | x_t, x_0).
  double posterior_variance(int t) const;

  /// sqrt(alpha_bar) * x0 + sqrt(1 - alpha_bar) * noise.
  Matrix corrupt(const Matrix& x0, int t, const Matrix& noise) const;

 private:
  std::vector<double> beta_;
  std::vector<double> alpha_bar_;
};

/// Gated residual convolution stack predicting the injected noise.
struct Denoiser {
  struct Layer {
    nn::Linear step_proj;
    nn::Linear cond_proj;
    nn::Conv1d conv;
    nn::Linear out_proj;
  };

  nn::Linear input;
  nn::Linear step_mlp_in, step_mlp_out;
  std::vector<Layer> layers;
  nn::Linear skip_proj;
  nn::Linear output;
  int channels = 0;

  Denoiser() = default;
  Denoiser(nn::ParameterStore& store, const std::string& name, const ModelConfig& config,
           Rng& rng);

  /// x_t: frames x n_mels, cond: frames x hidden_dim.
  Tensor operator()(const Tensor& x_t, int step, const Tensor& cond) const;
};

}  // namespace ptts::model
