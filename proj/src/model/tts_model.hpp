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

#include "features/types.hpp"
#include "model/diffusion.hpp"
#include "model/model_config.hpp"
#include "nn/layers.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ptts::model {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Resolution { Phoneme, Frame };
enum class ProsodyKind { Duration, Pitch, Energy };

inline constexpr int kMinReferenceFrames = 8;

struct HiddenSequence {
  Tensor values;
  Resolution resolution = Resolution::Phoneme;

  Eigen::Index length() const { return values.rows(); }
};

/// Observed values with a hidden flag per position; hidden entries carry 0.
struct PromptTrack {
  std::vector<double> values;
  std::vector<bool> mask;  // true = hidden, to be predicted

  std::size_t size() const { return values.size(); }
};

/// Extra predictor context. `speaker` feeds only the addall_spk variant and
/// `prompt_mel` only ns2_prompting (normalised mel of the visible region; may
/// have zero rows).
struct PredictorContext {
  Tensor speaker;
  Matrix prompt_mel;
};

// Module prefixes used for parameter names, freezing and checksums.
inline constexpr const char* kLinguisticEncoder = "linguistic_encoder";
inline constexpr const char* kStyleEncoder = "style_encoder";
inline constexpr const char* kTimbreEncoder = "timbre_encoder";
inline constexpr const char* kDecoder = "decoder";
const char* predictor_module(ProsodyKind kind);

class TtsModel {
 public:
  TtsModel(ModelConfig config, std::uint64_t seed);
  TtsModel(const TtsModel&) = delete;
  TtsModel& operator=(const TtsModel&) = delete;

  const ModelConfig& config() const { return config_; }
  nn::ParameterStore& parameters() { return store_; }
  const nn::ParameterStore& parameters() const { return store_; }
  const DiffusionSchedule& schedule() const { return schedule_; }

  HiddenSequence linguistic_encode(std::span<const int> phoneme_ids) const;
  HiddenSequence style_adaptive_encode(const HiddenSequence& h) const;
  /// log_mel: frames x n_mels in natural-log units. Returns 1 x spk_embed_dim.
  Tensor timbre_encode(const Matrix& log_mel) const;
  HiddenSequence length_regulate(const HiddenSequence& h, std::span<const int> durations) const;

  /// The sequence the predictor stack consumes (exposed for inspection).
  Tensor predictor_input(ProsodyKind kind, const HiddenSequence& h, const PromptTrack& prompt,
                         const PredictorContext& context = {}) const;
  /// length x 1 in feature units; durations pass through softplus.
  Tensor predict_prosody(ProsodyKind kind, const HiddenSequence& h, const PromptTrack& prompt,
                         const PredictorContext& context = {}) const;

  /// pitch/energy: frames x 1 feature columns; speaker: 1 x spk_embed_dim.
  Tensor decoder_condition(const HiddenSequence& h_frame, const Tensor& pitch,
                           const Tensor& energy, const Tensor& speaker) const;

  /// Noise-prediction MSE at step t for a normalised mel.
  Tensor diffusion_loss(const Matrix& mel_normalized, const Tensor& conditioning, int t,
                        const Matrix& noise) const;
  /// Ancestral sampling; returns normalised mel (frames x n_mels).
  Matrix diffusion_sample(const Tensor& conditioning, Eigen::Index frames,
                          std::uint64_t seed) const;

 private:
  struct Predictor {
    nn::Linear prompt_in;
    nn::Linear speaker_in;
    nn::Linear mel_in;
    nn::MultiHeadAttention mel_attention;
    std::vector<nn::ConformerBlock> conformer;
    std::vector<nn::ConvPredictorLayer> conv;
    std::vector<nn::AttentionLayer> attention;
    nn::Linear out;
  };

  void build_predictor(ProsodyKind kind, int depth, Rng& rng);
  const Predictor& predictor(ProsodyKind kind) const;

  ModelConfig config_;
  nn::ParameterStore store_;
  DiffusionSchedule schedule_;

  Tensor embedding_;
  std::vector<nn::FftBlock> linguistic_blocks_;
  std::vector<nn::FftBlock> style_blocks_;

  nn::Linear timbre_in_;
  std::vector<nn::FftBlock> timbre_blocks_;
  nn::Linear timbre_query_;
  Tensor basis_;
  nn::Linear timbre_out_;

  Predictor predictors_[3];

  nn::Linear pitch_proj_, energy_proj_, speaker_proj_;
  Denoiser denoiser_;
};

}  // namespace ptts::model
