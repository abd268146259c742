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


#include "inference/synthesizer.hpp"

#include "features/mel.hpp"
#include "inference/prompt.hpp"
#include "model/prosody_features.hpp"
#include "training/dataset.hpp"

namespace ptts::inference {

using model::ProsodyKind;
using nn::Matrix;
using nn::Tensor;

namespace {

std::vector<double> column_values(const Tensor& t, std::size_t from) {
  std::vector<double> out;
  for (Eigen::Index i = static_cast<Eigen::Index>(from); i < t.rows(); ++i) {
    out.push_back(t.value()(i, 0));
  }
  return out;
}

Matrix to_column(const std::vector<double>& v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return m;
}

void check_reference(const features::UtteranceFeatures& f, const char* what) {
  if (f.mel.frames() < model::kMinReferenceFrames) {
    throw SynthesisError(std::string(what) + " reference has " + std::to_string(f.mel.frames()) +
                         " frames; at least " + std::to_string(model::kMinReferenceFrames) +
                         " are required");
  }
}

}  // namespace

features::UtteranceFeatures reference_features(const features::Waveform& wav) {
  return features::extract_features_any_rate(wav);
}

SynthesisResult synthesize(const SynthesisRequest& request, const model::TtsModel& model,
                           const PhonemeInventory& inventory) {
  if (request.text.empty() && !request.phonemes) throw SynthesisError("text is empty");
  check_reference(request.timbre_ref, "timbre");
  check_reference(request.prosody_ref, "prosody");
  const auto& cfg = model.config();
  nn::NoGradGuard no_grad;
  SynthesisResult result;

  const std::vector<std::string> target_symbols =
      request.phonemes ? *request.phonemes : g2p(request.text, inventory);
  if (target_symbols.empty()) throw SynthesisError("no target phonemes");
  const std::vector<int> target_ids = inventory.ids_of(target_symbols);

  const auto& ref = request.prosody_ref;
  const int ref_frames = static_cast<int>(ref.mel.frames());
  std::vector<int> ref_ids;
  std::vector<int> ref_durations;
  bool ref_durations_known = false;
  if (request.prosody_ref_phonemes && !request.prosody_ref_phonemes->empty()) {
    ref_ids = inventory.ids_of(*request.prosody_ref_phonemes);
    if (static_cast<int>(ref_ids.size()) > ref_frames) {
      throw SynthesisError("prosody reference has more phonemes than frames");
    }
    if (request.prosody_ref_durations) {
      ref_durations = *request.prosody_ref_durations;
      long sum = 0;
      for (int d : ref_durations) {
        if (d < 0) throw SynthesisError("negative reference duration");
        sum += d;
      }
      if (ref_durations.size() != ref_ids.size() || sum != ref_frames) {
        throw SynthesisError("reference durations must cover every reference phoneme and frame");
      }
      ref_durations_known = true;
    } else if (request.prosody_ref_alignment) {
      ref_durations = features::durations_from_alignment(
          ref_ids.size(), *request.prosody_ref_alignment, ref_frames);
      ref_durations_known = true;
    } else {
      ref_durations = training::uniform_durations(ref_ids.size(), ref_frames);
      result.warnings.push_back(
          "prosody reference has no alignment; duration prompt is left hidden");
    }
  } else {
    result.warnings.push_back(
        "prosody reference has no phonemes; duration prompt is empty");
  }

  std::vector<int> ids = ref_ids;
  ids.insert(ids.end(), target_ids.begin(), target_ids.end());
  const model::HiddenSequence h = model.style_adaptive_encode(model.linguistic_encode(ids));

  const Tensor speaker = model.timbre_encode(request.timbre_ref.mel.values);
  model::PredictorContext ctx;
  ctx.speaker = speaker;
  if (cfg.variant == model::Variant::Ns2Prompting) {
    ctx.prompt_mel = model::normalize_mel(ref.mel.values, cfg);
  }

  // Durations: reference phonemes keep theirs, target phonemes are predicted.
  model::PromptTrack dur_prompt;
  if (ref_durations_known) {
    dur_prompt = build_prompt(model::durations_to_feature(ref_durations), target_ids.size());
  } else {
    dur_prompt.values.assign(ids.size(), 0.0);
    dur_prompt.mask.assign(ids.size(), true);
  }
  const Tensor dur_pred = model.predict_prosody(ProsodyKind::Duration, h, dur_prompt, ctx);
  result.durations = model::feature_to_durations(column_values(dur_pred, ref_ids.size()), 1);
  const int target_frames = [&] {
    int s = 0;
    for (int d : result.durations) s += d;
    return s;
  }();

  // Frame-level hidden states: regulated reference phonemes, or zeros when
  // the reference carries no phonemes.
  model::HiddenSequence h_frame;
  if (!ref_ids.empty()) {
    std::vector<int> all = ref_durations;
    all.insert(all.end(), result.durations.begin(), result.durations.end());
    h_frame = model.length_regulate(h, all);
  } else {
    const auto target_part = model.length_regulate(h, result.durations);
    const Tensor zeros = nn::constant(Matrix::Zero(ref_frames, cfg.hidden_dim));
    const Tensor parts[] = {zeros, target_part.values};
    h_frame = {nn::concat_rows(parts), model::Resolution::Frame};
  }

  const std::vector<double> ref_pitch =
      model::pitch_to_feature(model::interpolate_pitch(ref.pitch_hz, ref.voiced), cfg);
  const std::vector<double> ref_energy = model::energy_to_feature(ref.energy);
  if (static_cast<int>(ref_pitch.size()) != ref_frames ||
      static_cast<int>(ref_energy.size()) != ref_frames) {
    throw SynthesisError("prosody reference tracks do not match its mel length");
  }
  const auto pitch_prompt = build_prompt(ref_pitch, static_cast<std::size_t>(target_frames));
  const auto energy_prompt = build_prompt(ref_energy, static_cast<std::size_t>(target_frames));
  const Tensor pitch_pred = model.predict_prosody(ProsodyKind::Pitch, h_frame, pitch_prompt, ctx);
  const Tensor energy_pred =
      model.predict_prosody(ProsodyKind::Energy, h_frame, energy_prompt, ctx);

  std::vector<double> pitch_feature = ref_pitch;
  std::vector<double> energy_feature = ref_energy;
  const auto pitch_target = column_values(pitch_pred, ref_frames);
  const auto energy_target = column_values(energy_pred, ref_frames);
  pitch_feature.insert(pitch_feature.end(), pitch_target.begin(), pitch_target.end());
  energy_feature.insert(energy_feature.end(), energy_target.begin(), energy_target.end());

  const Tensor cond = model.decoder_condition(h_frame, nn::constant(to_column(pitch_feature)),
                                              nn::constant(to_column(energy_feature)), speaker);
  const Matrix sampled = model.diffusion_sample(cond, cond.rows(), request.seed);

  result.prompt_frames = static_cast<std::size_t>(ref_frames);
  result.mel.values = model::denormalize_mel(sampled.bottomRows(target_frames), cfg);
  result.pitch_hz = model::feature_to_pitch(pitch_target, cfg);
  result.energy = model::feature_to_energy(energy_target);
  return result;
}

}  // namespace ptts::inference
