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

#include "corpus/manifest.hpp"
#include "features/feature_cache.hpp"
#include "features/types.hpp"
#include "inference/g2p.hpp"
#include "model/model_config.hpp"
#include "training/masking.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ptts::training {

struct TrainingUtterance {
  std::string id;
  std::string speaker_id;
  std::vector<int> phoneme_ids;
  std::vector<int> durations;  // frames per phoneme, sums to frame count
  features::UtteranceFeatures raw;
  // Model-facing channels.
  nn::Matrix mel_normalized;
  nn::Matrix pitch_feature;     // frames x 1
  nn::Matrix energy_feature;    // frames x 1
  nn::Matrix duration_feature;  // phonemes x 1

  std::size_t frames() const { return static_cast<std::size_t>(raw.mel.frames()); }
};

struct Dataset {
  std::vector<TrainingUtterance> items;
  inference::PhonemeInventory inventory;
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  std::vector<std::string> warnings;
};

/// Sorted unique symbols over every entry (explicit phonemes, else the
/// character fallback of the text).
inference::PhonemeInventory inventory_from_manifest(const corpus::Manifest& manifest);

std::vector<std::string> entry_phonemes(const corpus::ManifestEntry& entry,
                                        const inference::PhonemeInventory& inventory);

/// Fills the model-facing channels of an utterance from its raw features.
void prepare_channels(TrainingUtterance& u, const model::ModelConfig& config);

/// Loads audio (or cached features), phonemes and alignment durations for
/// every entry. Entries without an alignment get uniformly split durations
/// and a warning.
Dataset build_dataset(const corpus::Manifest& manifest, const std::filesystem::path& manifest_path,
                      const inference::PhonemeInventory& inventory,
                      const model::ModelConfig& config,
                      const std::optional<features::FeatureCache>& cache);

/// Frame counts splitting `total_frames` as evenly as possible over `count`
/// phonemes; the last phoneme takes the remainder.
std::vector<int> uniform_durations(std::size_t count, int total_frames);

}  // namespace ptts::training
