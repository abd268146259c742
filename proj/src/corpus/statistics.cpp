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

#include "corpus/pipeline.hpp"
#include "util/moments.hpp"
#include "util/text.hpp"

#include <cmath>

namespace ptts::corpus {

std::size_t spoken_characters(std::string_view text) {
  std::size_t n = 0;
  for (char32_t c : text::decode_utf8(text)) {
    if (!text::is_whitespace(c) && !text::is_punctuation(c)) ++n;
  }
  return n;
}

SceneStatsReport scene_statistics(const Manifest& manifest, const PitchSource* pitch) {
  SceneStatsReport report;
  for (Scene scene : kAllScenes) {
    double seconds = 0.0;
    std::size_t clips = 0;
    std::size_t chars = 0;
    std::map<std::string, std::vector<double>> voiced_by_speaker;
    for (const ManifestEntry& e : manifest) {
      if (e.scene != scene) continue;
      ++clips;
      seconds += e.duration_s;
      chars += spoken_characters(e.text);
      if (pitch != nullptr) {
        auto it = pitch->find(e.id);
        if (it != pitch->end()) {
          auto& pool = voiced_by_speaker[e.speaker_id];
          const PitchSeries& p = it->second;
          for (std::size_t i = 0; i < p.pitch_hz.size() && i < p.voiced.size(); ++i) {
            if (p.voiced[i]) pool.push_back(p.pitch_hz[i]);
          }
        }
      }
    }
    if (scene == Scene::Other && clips == 0) continue;

    SceneStats row;
    row.scene = scene;
    if (clips == 0) {
      report.warnings.push_back("scene " + std::string(scene_name(scene)) + " has no clips");
      report.rows.push_back(row);
      continue;
    }
    row.clip_count = clips;
    row.hours = seconds / 3600.0;
    row.speed_cpm = static_cast<double>(chars) / (seconds / 60.0);

    double mean_sum = 0.0, var_sum = 0.0, skew_sum = 0.0;
    std::size_t speakers = 0;
    for (const auto& [speaker, pool] : voiced_by_speaker) {
      if (pool.empty()) continue;
      const CentralMoments m = central_moments(pool);
      mean_sum += m.mean;
      var_sum += m.m2;
      skew_sum += m.m2 > 0.0 ? m.m3 / std::pow(m.m2, 1.5) : 0.0;
      ++speakers;
    }
    if (speakers > 0) {
      row.pitch_mean_hz = mean_sum / static_cast<double>(speakers);
      row.pitch_var = var_sum / static_cast<double>(speakers);
      row.pitch_skew = skew_sum / static_cast<double>(speakers);
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace ptts::corpus
