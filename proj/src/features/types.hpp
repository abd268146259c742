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

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace ptts::features {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kSampleRate = 16000;
inline constexpr int kFftSize = 1024;
inline constexpr int kHopSize = 256;
inline constexpr int kWindowSize = 1024;
inline constexpr int kMelBands = 80;
inline constexpr double kMelFmin = 0.0;
inline constexpr double kMelFmax = 8000.0;
inline constexpr double kMagnitudeFloor = 1e-5;
inline constexpr double kHopSeconds = static_cast<double>(kHopSize) / kSampleRate;

inline constexpr double kPitchMinHz = 50.0;
inline constexpr double kPitchMaxHz = 600.0;
inline constexpr double kPeriodicityThreshold = 0.3;

class FeatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

/// frames x n_mels natural-log magnitudes.
struct MelSpectrogram {
  FeatureMatrix values;
  double hop_s = kHopSeconds;

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index n_mels() const { return values.cols(); }
};

/// Frame/phoneme resolution prosody. Σ durations equals the frame count
/// whenever durations are present.
struct ProsodyTrack {
  std::vector<int> durations;
  std::vector<double> pitch_hz;  // 0 where unvoiced
  std::vector<bool> voiced;
  std::vector<double> energy;
  std::vector<bool> mask;  // true = hidden from the model

  std::size_t frames() const { return pitch_hz.size(); }
};

struct UtteranceFeatures {
  MelSpectrogram mel;
  std::vector<double> pitch_hz;
  std::vector<bool> voiced;
  std::vector<double> energy;
};

}  // namespace ptts::features
