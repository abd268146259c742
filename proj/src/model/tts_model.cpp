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


#include "model/tts_model.hpp"

#include "model/prosody_features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptts::model {

namespace {

Resolution expected_resolution(ProsodyKind kind) {
  return kind == ProsodyKind::Duration ? Resolution::Phoneme : Resolution::Frame;
}

bool uses_conformer(Variant v) {
  return v != Variant::CnnPredictor && v != Variant::AttenPredictor;
}

}  // namespace

const char* predictor_module(ProsodyKind kind) {
  switch (kind) {
    case ProsodyKind::Duration: return "duration_predictor";
    case ProsodyKind::Pitch: return "pitch_predictor";
    case ProsodyKind::Energy: return "energy_predictor";
  }
  return "duration_predictor";
}

TtsModel::TtsModel(ModelConfig config, std::uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(derive_seed(seed, "model.init"));
  const int d = config_.hidden_dim;
  schedule_ = DiffusionSchedule(config_.diffusion_steps, config_.beta_start, config_.beta_end);

  const std::string le = kLinguisticEncoder;
  embedding_ = store_.create(le + ".embedding",
                             nn::normal_init(config_.vocab_size, d, 1.0 / std::sqrt(d), rng));
  for (int i = 0; i < config_.encoder_layers; ++i) {
    linguistic_blocks_.emplace_back(store_, le + ".block" + std::to_string(i), d,
                                    config_.attention_heads, config_.ffn_dim, config_.ffn_kernel,
                                    rng);
  }
  const std::string se = kStyleEncoder;
  for (int i = 0; i < config_.style_layers; ++i) {
    style_blocks_.emplace_back(store_, se + ".block" + std::to_string(i), d,
                               config_.attention_heads, config_.ffn_dim, config_.ffn_kernel, rng);
  }

  const std::string te = kTimbreEncoder;
  timbre_in_ = nn::Linear(store_, te + ".input", config_.n_mels, d, rng);
  for (int i = 0; i < config_.timbre_layers; ++i) {
    timbre_blocks_.emplace_back(store_, te + ".block" + std::to_string(i), d,
                                config_.attention_heads, config_.ffn_dim, config_.ffn_kernel, rng);
  }
  timbre_query_ = nn::Linear(store_, te + ".query", d, config_.basis_dim, rng);
  basis_ = store_.create(te + ".basis",
                         nn::normal_init(config_.basis_count, config_.basis_dim, 1.0, rng));
  timbre_out_ = nn::Linear(store_, te + ".output", config_.basis_dim, config_.spk_embed_dim, rng);

  build_predictor(ProsodyKind::Duration, config_.predictor_layers.duration, rng);
  build_predictor(ProsodyKind::Pitch, config_.predictor_layers.pitch, rng);
  build_predictor(ProsodyKind::Energy, config_.predictor_layers.energy, rng);

  const std::string dec = kDecoder;
  pitch_proj_ = nn::Linear(store_, dec + ".pitch_proj", 1, d, rng, false);
  energy_proj_ = nn::Linear(store_, dec + ".energy_proj", 1, d, rng, false);
  speaker_proj_ = nn::Linear(store_, dec + ".speaker_proj", config_.spk_embed_dim, d, rng, false);
  denoiser_ = Denoiser(store_, dec + ".denoiser", config_, rng);
}

void TtsModel::build_predictor(ProsodyKind kind, int depth, Rng& rng) {
  const std::string name = predictor_module(kind);
  const int d = config_.hidden_dim;
  Predictor& p = predictors_[static_cast<int>(kind)];
  const Variant v = config_.variant;
  if (v == Variant::Ns2Prompting) {
    p.mel_in = nn::Linear(store_, name + ".mel_in", config_.n_mels, d, rng);
    p.mel_attention =
        nn::MultiHeadAttention(store_, name + ".mel_attention", d, config_.conformer_heads, rng);
  } else {
    p.prompt_in = nn::Linear(store_, name + ".prompt_in", 2, d, rng);
  }
  if (v == Variant::AddallSpk) {
    p.speaker_in = nn::Linear(store_, name + ".speaker_in", config_.spk_embed_dim, d, rng);
  }
  for (int i = 0; i < depth; ++i) {
    const std::string layer = name + ".layer" + std::to_string(i);
    if (uses_conformer(v)) {
      p.conformer.emplace_back(store_, layer, d, config_.conformer_heads, config_.conformer_kernel,
                               rng);
    } else {
      p.conv.emplace_back(store_, layer, d, config_.cnn_kernel, rng);
    }
  }
  if (v == Variant::AttenPredictor) {
    p.attention.emplace_back(store_, name + ".attention", d, config_.conformer_heads, rng);
  }
  p.out = nn::Linear(store_, name + ".output", d, 1, rng);
}

const TtsModel::Predictor& TtsModel::predictor(ProsodyKind kind) const {
  return predictors_[static_cast<int>(kind)];
}

HiddenSequence TtsModel::linguistic_encode(std::span<const int> phoneme_ids) const {
  if (phoneme_ids.empty()) throw ModelError("linguistic_encode: empty phoneme sequence");
  for (int id : phoneme_ids) {
    if (id < 0 || id >= config_.vocab_size) {
      throw ModelError("linguistic_encode: phoneme id " + std::to_string(id) +
                       " outside vocabulary of " + std::to_string(config_.vocab_size));
    }
  }
  const auto n = static_cast<Eigen::Index>(phoneme_ids.size());
  Tensor x = nn::gather_rows(embedding_, phoneme_ids);
  x = nn::add(x, nn::constant(nn::sinusoidal_positions(n, config_.hidden_dim)));
  for (const auto& block : linguistic_blocks_) x = block(x);
  return {x, Resolution::Phoneme};
}

HiddenSequence TtsModel::style_adaptive_encode(const HiddenSequence& h) const {
  if (h.resolution != Resolution::Phoneme) {
    throw ModelError("style_adaptive_encode: expected a phoneme-resolution sequence");
  }
  Tensor x = h.values;
  for (const auto& block : style_blocks_) x = block(x);
  return {x, Resolution::Phoneme};
}

Tensor TtsModel::timbre_encode(const Matrix& log_mel) const {
  if (log_mel.rows() < kMinReferenceFrames) {
    throw ModelError("timbre_encode: reference has " + std::to_string(log_mel.rows()) +
                     " frames, at least " + std::to_string(kMinReferenceFrames) + " required");
  }
  if (log_mel.cols() != config_.n_mels) {
    throw ModelError("timbre_encode: reference has " + std::to_string(log_mel.cols()) +
                     " mel bands, model expects " + std::to_string(config_.n_mels));
  }
  Tensor x = nn::relu(timbre_in_(nn::constant(normalize_mel(log_mel, config_))));
  for (const auto& block : timbre_blocks_) x = block(x);
  Tensor query = timbre_query_(nn::mean_rows(x));
  Tensor scores =
      nn::scale(nn::matmul(query, nn::transpose(basis_)), 1.0 / std::sqrt(config_.basis_dim));
  Tensor readout = nn::matmul(nn::softmax_rows(scores), basis_);
  return timbre_out_(readout);
}

HiddenSequence TtsModel::length_regulate(const HiddenSequence& h,
                                         std::span<const int> durations) const {
  if (h.resolution != Resolution::Phoneme) {
    throw ModelError("length_regulate: expected a phoneme-resolution sequence");
  }
  if (static_cast<Eigen::Index>(durations.size()) != h.length()) {
    throw ModelError("length_regulate: " + std::to_string(durations.size()) +
                     " durations for " + std::to_string(h.length()) + " phonemes");
  }
  long total = 0;
  for (int d : durations) {
    if (d < 0) throw ModelError("length_regulate: negative duration");
    total += d;
  }
  if (total == 0) throw ModelError("length_regulate: all durations are zero");
  return {nn::repeat_rows(h.values, durations), Resolution::Frame};
}

Tensor TtsModel::predictor_input(ProsodyKind kind, const HiddenSequence& h,
                                 const PromptTrack& prompt,
                                 const PredictorContext& context) const {
  if (h.resolution != expected_resolution(kind)) {
    throw ModelError(std::string(predictor_module(kind)) + ": wrong input resolution");
  }
  const Eigen::Index n = h.length();
  if (static_cast<Eigen::Index>(prompt.values.size()) != n ||
      static_cast<Eigen::Index>(prompt.mask.size()) != n) {
    throw ModelError(std::string(predictor_module(kind)) + ": prompt length " +
                     std::to_string(prompt.values.size()) + " does not match sequence length " +
                     std::to_string(n));
  }
  const Predictor& p = predictor(kind);
  Tensor x = h.values;
  if (config_.variant == Variant::Ns2Prompting) {
    if (context.prompt_mel.rows() > 0) {
      Tensor memory = p.mel_in(nn::constant(context.prompt_mel));
      x = nn::add(x, p.mel_attention(x, memory));
    }
  } else {
    Matrix channels(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool hidden = prompt.mask[i];
      channels(i, 0) = hidden ? 0.0 : prompt.values[i];
      channels(i, 1) = hidden ? 1.0 : 0.0;
    }
    x = nn::add(x, p.prompt_in(nn::constant(std::move(channels))));
  }
  if (config_.variant == Variant::AddallSpk) {
    if (!context.speaker.defined()) {
      throw ModelError("addall_spk predictors require a speaker representation");
    }
    x = nn::add(x, p.speaker_in(context.speaker));
  }
  return x;
}

Tensor TtsModel::predict_prosody(ProsodyKind kind, const HiddenSequence& h,
                                 const PromptTrack& prompt,
                                 const PredictorContext& context) const {
  const Predictor& p = predictor(kind);
  Tensor x = predictor_input(kind, h, prompt, context);
  for (const auto& block : p.conformer) x = block(x);
  for (const auto& layer : p.conv) x = layer(x);
  for (const auto& layer : p.attention) x = layer(x);
  Tensor y = p.out(x);
  return kind == ProsodyKind::Duration ? nn::softplus(y) : y;
}

Tensor TtsModel::decoder_condition(const HiddenSequence& h_frame, const Tensor& pitch,
                                   const Tensor& energy, const Tensor& speaker) const {
  if (h_frame.resolution != Resolution::Frame) {
    throw ModelError("decoder_condition: expected a frame-resolution sequence");
  }
  const Eigen::Index n = h_frame.length();
  if (pitch.rows() != n || energy.rows() != n || pitch.cols() != 1 || energy.cols() != 1) {
    throw ModelError("decoder_condition: pitch/energy must be " + std::to_string(n) +
                     " x 1 to match the frame sequence");
  }
  if (speaker.rows() != 1 || speaker.cols() != config_.spk_embed_dim) {
    throw ModelError("decoder_condition: speaker vector has the wrong width");
  }
  Tensor c = nn::add(h_frame.values, pitch_proj_(pitch));
  c = nn::add(c, energy_proj_(energy));
  return nn::add(c, speaker_proj_(speaker));
}

Tensor TtsModel::diffusion_loss(const Matrix& mel_normalized, const Tensor& conditioning, int t,
                                const Matrix& noise) const {
  if (mel_normalized.rows() != conditioning.rows() || mel_normalized.cols() != config_.n_mels ||
      noise.rows() != mel_normalized.rows() || noise.cols() != mel_normalized.cols()) {
    throw ModelError("diffusion_loss: mel, noise and conditioning shapes disagree");
  }
  if (t < 1 || t > schedule_.steps()) throw ModelError("diffusion_loss: step out of range");
  Tensor x_t = nn::constant(schedule_.corrupt(mel_normalized, t, noise));
  return nn::mse(denoiser_(x_t, t, conditioning), noise);
}

Matrix TtsModel::diffusion_sample(const Tensor& conditioning, Eigen::Index frames,
                                  std::uint64_t seed) const {
  if (frames <= 0) throw ModelError("diffusion_sample: frame count must be positive");
  if (conditioning.rows() != frames) {
    throw ModelError("diffusion_sample: conditioning has " + std::to_string(conditioning.rows()) +
                     " frames, requested " + std::to_string(frames));
  }
  nn::NoGradGuard no_grad;
  Rng rng(derive_seed(seed, "diffusion.sample"));
  auto gaussian = [&] {
    Matrix m(frames, config_.n_mels);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
    return m;
  };
  Matrix x = gaussian();
  for (int t = schedule_.steps(); t >= 1; --t) {
    const double ab = schedule_.alpha_bar(t);
    const double ab_prev = schedule_.alpha_bar_prev(t);
    const double beta = schedule_.beta(t);
    const Matrix eps = denoiser_(nn::constant(x), t, conditioning).value();
    Matrix x0 = (x - std::sqrt(1.0 - ab) * eps) / std::sqrt(ab);
    x0 = x0.cwiseMax(-1.0).cwiseMin(1.0);
    const double c0 = std::sqrt(ab_prev) * beta / (1.0 - ab);
    const double ct = std::sqrt(1.0 - beta) * (1.0 - ab_prev) / (1.0 - ab);
    x = c0 * x0 + ct * x;
    if (t > 1) x += std::sqrt(schedule_.posterior_variance(t)) * gaussian();
  }
  return x;
}

}  // namespace ptts::model
