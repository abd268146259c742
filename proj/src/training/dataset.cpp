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


#include "training/dataset.hpp"

#include "features/durations.hpp"
#include "features/mel.hpp"
#include "features/wav_io.hpp"
#include "model/prosody_features.hpp"

#include <algorithm>
#include <set>

namespace ptts::training {

namespace {

nn::Matrix column(const std::vector<double>& v) {
  nn::Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return m;
}

}  // namespace

inference::PhonemeInventory inventory_from_manifest(const corpus::Manifest& manifest) {
  std::set<std::string> symbols;
  for (const auto& e : manifest) {
    const auto list = e.phonemes.empty() ? inference::character_symbols(e.text) : e.phonemes;
    symbols.insert(list.begin(), list.end());
  }
  return inference::PhonemeInventory({symbols.begin(), symbols.end()});
}

std::vector<std::string> entry_phonemes(const corpus::ManifestEntry& entry,
                                        const inference::PhonemeInventory& inventory) {
  return entry.phonemes.empty() ? inference::g2p(entry.text, inventory) : entry.phonemes;
}

std::vector<int> uniform_durations(std::size_t count, int total_frames) {
  std::vector<int> out(count, 0);
  if (count == 0) return out;
  // Residual to the last phoneme, as for alignments.
  const int base = total_frames / static_cast<int>(count);
  std::fill(out.begin(), out.end(), base);
  out.back() += total_frames - base * static_cast<int>(count);
  return out;
}

void prepare_channels(TrainingUtterance& u, const model::ModelConfig& config) {
  const auto& raw = u.raw;
  u.mel_normalized = model::normalize_mel(raw.mel.values, config);
  u.pitch_feature =
      column(model::pitch_to_feature(model::interpolate_pitch(raw.pitch_hz, raw.voiced), config));
  u.energy_feature = column(model::energy_to_feature(raw.energy));
  u.duration_feature = column(model::durations_to_feature(u.durations));
}

Dataset build_dataset(const corpus::Manifest& manifest, const std::filesystem::path& manifest_path,
                      const inference::PhonemeInventory& inventory,
                      const model::ModelConfig& config,
                      const std::optional<features::FeatureCache>& cache) {
  if (static_cast<int>(inventory.size()) > config.vocab_size) {
    throw TrainingError("phoneme inventory has " + std::to_string(inventory.size()) +
                        " symbols but model.vocab_size is " + std::to_string(config.vocab_size));
  }
  Dataset ds;
  ds.inventory = inventory;
  for (const auto& e : manifest) {
    TrainingUtterance u;
    u.id = e.id;
    u.speaker_id = e.speaker_id;
    const auto symbols = entry_phonemes(e, inventory);
    u.phoneme_ids = inventory.ids_of(symbols);

    std::optional<features::UtteranceFeatures> f;
    if (cache) f = cache->load(e.id);
    if (!f) {
      f = features::extract_features_any_rate(
          features::read_wav(corpus::resolve_path(manifest_path, e.audio_path)));
      if (cache) cache->store(e.id, *f);
    }
    u.raw = std::move(*f);
    if (u.raw.mel.values.cols() != config.n_mels) {
      throw TrainingError(e.id + ": features have " + std::to_string(u.raw.mel.values.cols()) +
                          " mel bands, model expects " + std::to_string(config.n_mels));
    }
    const int frames = static_cast<int>(u.raw.mel.frames());
    if (static_cast<std::size_t>(frames) < symbols.size()) {
      throw TrainingError(e.id + ": fewer frames than phonemes");
    }
    if (e.alignment_path) {
      const auto spans =
          features::read_alignment(corpus::resolve_path(manifest_path, *e.alignment_path));
      u.durations = features::durations_from_alignment(symbols.size(), spans, frames);
    } else {
      u.durations = uniform_durations(symbols.size(), frames);
      ds.warnings.push_back(e.id + ": no alignment, durations split uniformly");
    }
    prepare_channels(u, config);
    ds.by_speaker[u.speaker_id].push_back(ds.items.size());
    ds.items.push_back(std::move(u));
  }
  if (ds.items.empty()) throw TrainingError("training manifest is empty");
  return ds;
}

}  // namespace ptts::training
