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

// Conversions between measured prosody tracks and the scalar channels the
// predictors and the decoder consume.

#include "features/types.hpp"
#include "model/model_config.hpp"

#include <vector>

namespace ptts::model {

/// Linear interpolation of voiced pitch through unvoiced gaps; leading and
/// trailing gaps hold the nearest voiced value. All-unvoiced input yields
/// zeros.
std::vector<double> interpolate_pitch(const std::vector<double>& pitch_hz,
                                      const std::vector<bool>& voiced);

/// Normalised log-Hz. Non-positive inputs map to 0.
std::vector<double> pitch_to_feature(const std::vector<double>& hz, const ModelConfig& config);
std::vector<double> feature_to_pitch(const std::vector<double>& feature,
                                     const ModelConfig& config);

std::vector<double> energy_to_feature(const std::vector<double>& energy);
std::vector<double> feature_to_energy(const std::vector<double>& feature);

std::vector<double> durations_to_feature(const std::vector<int>& durations);
/// Rounds expm1(feature) to frames, never below `min_frames`.
std::vector<int> feature_to_durations(const std::vector<double>& feature, int min_frames);

features::FeatureMatrix normalize_mel(const features::FeatureMatrix& log_mel,
                                      const ModelConfig& config);
features::FeatureMatrix denormalize_mel(const features::FeatureMatrix& normalized,
                                        const ModelConfig& config);

}  // namespace ptts::model
