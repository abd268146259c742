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

namespace ptts::features {

/// Slaney-scale triangular filters with area normalisation, n_mels x 513.
const FeatureMatrix& mel_filterbank();

/// ln(max(mel magnitude, 1e-5)); 16 kHz input only.
MelSpectrogram mel_spectrogram(const Waveform& wav);

/// Per-frame L2 norm of the linear STFT magnitude.
std::vector<double> extract_energy(const Waveform& wav);

/// Autocorrelation F0 in [50, 600] Hz; frames whose peak normalised
/// correlation is below 0.3 are unvoiced with pitch 0.
struct PitchTrack {
  std::vector<double> pitch_hz;
  std::vector<bool> voiced;
};
PitchTrack extract_pitch(const Waveform& wav);

/// Mel, pitch and energy from one pass over the framing.
UtteranceFeatures extract_features(const Waveform& wav);

/// Resamples to 16 kHz when needed, then `extract_features`.
UtteranceFeatures extract_features_any_rate(const Waveform& wav);

}  // namespace ptts::features
