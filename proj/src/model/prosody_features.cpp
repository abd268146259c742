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


#include "model/prosody_features.hpp"

#include <algorithm>
#include <cmath>

namespace ptts::model {

std::vector<double> interpolate_pitch(const std::vector<double>& pitch_hz,
                                      const std::vector<bool>& voiced) {
  const std::size_t n = pitch_hz.size();
  if (voiced.size() != n) throw features::FeatureError("pitch and voicing lengths differ");
  std::vector<double> out(n, 0.0);
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < n; ++i) {
    if (voiced[i] && pitch_hz[i] > 0.0) anchors.push_back(i);
  }
  if (anchors.empty()) return out;
  for (std::size_t i = 0; i < anchors.front(); ++i) out[i] = pitch_hz[anchors.front()];
  for (std::size_t i = anchors.back(); i < n; ++i) out[i] = pitch_hz[anchors.back()];
  for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
    const std::size_t lo = anchors[a], hi = anchors[a + 1];
    for (std::size_t i = lo; i < hi; ++i) {
      const double w = static_cast<double>(i - lo) / static_cast<double>(hi - lo);
      out[i] = (1.0 - w) * pitch_hz[lo] + w * pitch_hz[hi];
    }
  }
  return out;
}

std::vector<double> pitch_to_feature(const std::vector<double>& hz, const ModelConfig& config) {
  std::vector<double> out(hz.size(), 0.0);
  for (std::size_t i = 0; i < hz.size(); ++i) {
    if (hz[i] > 0.0) out[i] = (std::log(hz[i]) - config.pitch_log_mean) / config.pitch_log_std;
  }
  return out;
}

std::vector<double> feature_to_pitch(const std::vector<double>& feature,
                                     const ModelConfig& config) {
  std::vector<double> out(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) {
    out[i] = std::exp(feature[i] * config.pitch_log_std + config.pitch_log_mean);
  }
  return out;
}

std::vector<double> energy_to_feature(const std::vector<double>& energy) {
  std::vector<double> out(energy.size());
  for (std::size_t i = 0; i < energy.size(); ++i) out[i] = std::log1p(std::max(energy[i], 0.0));
  return out;
}

std::vector<double> feature_to_energy(const std::vector<double>& feature) {
  std::vector<double> out(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) out[i] = std::max(std::expm1(feature[i]), 0.0);
  return out;
}

std::vector<double> durations_to_feature(const std::vector<int>& durations) {
  std::vector<double> out(durations.size());
  for (std::size_t i = 0; i < durations.size(); ++i) {
    out[i] = std::log1p(static_cast<double>(std::max(durations[i], 0)));
  }
  return out;
}

std::vector<int> feature_to_durations(const std::vector<double>& feature, int min_frames) {
  std::vector<int> out(feature.size());
  for (std::size_t i = 0; i < feature.size(); ++i) {
    const double frames = std::round(std::expm1(std::max(feature[i], 0.0)));
    out[i] = std::max(min_frames, static_cast<int>(std::min(frames, 1e6)));
  }
  return out;
}

features::FeatureMatrix normalize_mel(const features::FeatureMatrix& log_mel,
                                      const ModelConfig& config) {
  const double span = config.mel_max - config.mel_min;
  return ((log_mel.array() - config.mel_min) * (2.0 / span) - 1.0).matrix();
}

features::FeatureMatrix denormalize_mel(const features::FeatureMatrix& normalized,
                                        const ModelConfig& config) {
  const double span = config.mel_max - config.mel_min;
  return ((normalized.array() + 1.0) * (span / 2.0) + config.mel_min).matrix();
}

}  // namespace ptts::model
