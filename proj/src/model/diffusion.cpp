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


#include "model/diffusion.hpp"

#include <cmath>

namespace ptts::model {

DiffusionSchedule::DiffusionSchedule(int steps, double beta_start, double beta_end) {
  if (steps <= 0) throw ConfigError("diffusion steps must be positive");
  if (!(beta_start > 0.0 && beta_start < beta_end && beta_end < 1.0)) {
    throw ConfigError("diffusion betas must satisfy 0 < start < end < 1");
  }
  beta_.resize(steps);
  alpha_bar_.resize(steps);
  double running = 1.0;
  for (int k = 0; k < steps; ++k) {
    const double w = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    beta_[k] = beta_start + (beta_end - beta_start) * w;
    running *= 1.0 - beta_[k];
    alpha_bar_[k] = running;
  }
}

double DiffusionSchedule::posterior_variance(int t) const {
  return (1.0 - alpha_bar_prev(t)) / (1.0 - alpha_bar(t)) * beta(t);
}

Matrix DiffusionSchedule::corrupt(const Matrix& x0, int t, const Matrix& noise) const {
  const double ab = alpha_bar(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * noise;
}

Denoiser::Denoiser(nn::ParameterStore& store, const std::string& name,
                   const ModelConfig& config, Rng& rng)
    : channels(config.decoder_channels) {
  const int c = channels;
  input = nn::Linear(store, name + ".input", config.n_mels, c, rng);
  step_mlp_in = nn::Linear(store, name + ".step_mlp_in", c, 4 * c, rng);
  step_mlp_out = nn::Linear(store, name + ".step_mlp_out", 4 * c, c, rng);
  for (int l = 0; l < config.decoder_layers; ++l) {
    const std::string p = name + ".layer" + std::to_string(l);
    Layer layer;
    layer.step_proj = nn::Linear(store, p + ".step_proj", c, c, rng);
    layer.cond_proj = nn::Linear(store, p + ".cond_proj", config.hidden_dim, 2 * c, rng);
    layer.conv = nn::Conv1d(store, p + ".conv", c, 2 * c, config.decoder_kernel,
                            config.decoder_dilation, rng);
    layer.out_proj = nn::Linear(store, p + ".out_proj", c, 2 * c, rng);
    layers.push_back(std::move(layer));
  }
  skip_proj = nn::Linear(store, name + ".skip_proj", c, c, rng);
  output = nn::Linear(store, name + ".output", c, config.n_mels, rng);
}

Tensor Denoiser::operator()(const Tensor& x_t, int step, const Tensor& cond) const {
  const Eigen::Index c = channels;
  Tensor x = nn::relu(input(x_t));
  Tensor emb = nn::constant(nn::sinusoidal_embedding(static_cast<double>(step), channels));
  emb = step_mlp_out(nn::silu(step_mlp_in(emb)));

  Tensor skips;
  for (const Layer& layer : layers) {
    Tensor y = nn::add(x, layer.step_proj(emb));
    y = nn::add(layer.conv(y), layer.cond_proj(cond));
    Tensor gated = nn::mul(nn::sigmoid(nn::slice_cols(y, 0, c)), nn::tanh(nn::slice_cols(y, c, c)));
    Tensor out = layer.out_proj(gated);
    x = nn::scale(nn::add(x, nn::slice_cols(out, 0, c)), M_SQRT1_2);
    Tensor skip = nn::slice_cols(out, c, c);
    skips = skips.defined() ? nn::add(skips, skip) : skip;
  }
  skips = nn::scale(skips, 1.0 / std::sqrt(static_cast<double>(layers.size())));
  return output(nn::relu(skip_proj(skips)));
}

}  // namespace ptts::model
