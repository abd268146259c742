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

// Model configurations shared by tests.

#include "model/model_config.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ptts::testing {

/// Very small model for fast unit tests.
inline model::ModelConfig tiny_config(model::Variant variant = model::Variant::Baseline) {
  model::ModelConfig c;
  c.hidden_dim = 16;
  c.spk_embed_dim = 8;
  c.basis_dim = 8;
  c.basis_count = 6;
  c.decoder_layers = 2;
  c.decoder_channels = 8;
  c.diffusion_steps = 10;
  c.encoder_layers = 1;
  c.style_layers = 1;
  c.timbre_layers = 1;
  c.ffn_dim = 16;
  c.ffn_kernel = 3;
  c.vocab_size = 16;
  c.variant = variant;
  return c;
}

/// Toy-corpus training configuration.
inline model::ModelConfig toy_config(model::Variant variant = model::Variant::Baseline) {
  model::ModelConfig c;
  c.hidden_dim = 32;
  c.spk_embed_dim = 32;
  c.basis_dim = 32;
  c.basis_count = 16;
  c.decoder_layers = 4;
  c.decoder_channels = 32;
  c.encoder_layers = 2;
  c.style_layers = 1;
  c.timbre_layers = 1;
  c.ffn_dim = 64;
  c.ffn_kernel = 3;
  c.vocab_size = 16;
  c.variant = variant;
  return c;
}

/// Run-config text for a tiny model trained for a few steps.
inline std::string tiny_run_config_text(const std::string& manifest, const std::string& run_dir,
                                        long steps = 3) {
  return "# tiny\n"
         "model.hidden_dim = 16\nmodel.spk_embed_dim = 8\nmodel.basis_dim = 8\n"
         "model.basis_count = 6\nmodel.decoder_layers = 2\nmodel.decoder_channels = 8\n"
         "model.diffusion_steps = 10\nmodel.encoder_layers = 1\nmodel.style_layers = 1\n"
         "model.timbre_layers = 1\nmodel.ffn_dim = 16\nmodel.vocab_size = 16\n"
         "data.manifest = " + manifest + "\ndata.run_dir = " + run_dir + "\n" +
         "training.steps = " + std::to_string(steps) + "\ntraining.batch_size = 2\n"
         "training.log_every = 1\ntraining.seed = 5\n";
}

/// Linear time-resampling of `track` onto `length` points.
inline std::vector<double> resample_track(const std::vector<double>& track, std::size_t length) {
  std::vector<double> out(length, 0.0);
  if (track.empty() || length == 0) return out;
  const std::size_t n = track.size();
  for (std::size_t i = 0; i < length; ++i) {
    const double pos = length > 1 ? static_cast<double>(i) * (n - 1) / (length - 1) : 0.0;
    const std::size_t i0 = static_cast<std::size_t>(pos);
    const std::size_t i1 = std::min(n - 1, i0 + 1);
    const double w = pos - static_cast<double>(i0);
    out[i] = (1.0 - w) * track[i0] + w * track[i1];
  }
  return out;
}

}  // namespace ptts::testing
