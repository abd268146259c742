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

#include "features/durations.hpp"
#include "features/types.hpp"
#include "inference/g2p.hpp"
#include "model/tts_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ptts::inference {

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SynthesisRequest {
  std::string text;
  std::optional<std::vector<std::string>> phonemes;  // bypasses G2P when set
  features::UtteranceFeatures timbre_ref;
  features::UtteranceFeatures prosody_ref;
  /// Phonemes of the prosody reference; enables duration prompting.
  std::optional<std::vector<std::string>> prosody_ref_phonemes;
  /// Per-phoneme spans of the prosody reference. Without them the reference
  /// frames are split evenly and the duration prompt stays hidden.
  std::optional<std::vector<features::TimeSpan>> prosody_ref_alignment;
  /// Frame counts per reference phoneme; takes precedence over the alignment.
  std::optional<std::vector<int>> prosody_ref_durations;
  std::uint64_t seed = 0;
};

struct SynthesisResult {
  features::MelSpectrogram mel;   // target region only, natural-log units
  std::vector<int> durations;     // predicted frames per target phoneme
  std::vector<double> pitch_hz;   // target region, per frame
  std::vector<double> energy;     // target region, per frame
  std::size_t prompt_frames = 0;  // cropped from the front
  std::vector<std::string> warnings;
};

/// Extracts features from reference audio (any sample rate).
features::UtteranceFeatures reference_features(const features::Waveform& wav);

SynthesisResult synthesize(const SynthesisRequest& request, const model::TtsModel& model,
                           const PhonemeInventory& inventory);

}  // namespace ptts::inference
