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


#include "scene_corpus.hpp"

#include "features/durations.hpp"
#include "features/wav_io.hpp"
#include "util/random.hpp"
#include "util/text.hpp"

#include <cmath>
#include <numbers>

namespace ptts::testing {

std::string cjk_text(std::size_t count, std::size_t offset) {
  std::u32string s;
  for (std::size_t i = 0; i < count; ++i) s.push_back(static_cast<char32_t>(0x4E00 + offset + i));
  return text::encode_utf8(s);
}

std::filesystem::path write_scene_corpus(const std::filesystem::path& dir,
                                         const SceneCorpusOptions& o) {
  std::filesystem::create_directories(dir);
  Rng rng(derive_seed(o.seed, "scene.corpus"));
  corpus::Manifest manifest;
  const corpus::Scene scenes[] = {corpus::Scene::Chat, corpus::Scene::News, corpus::Scene::QA,
                                  corpus::Scene::Storytelling};
  int scene_index = 0;
  for (corpus::Scene scene : scenes) {
    int noisy_left = 2;
    for (int s = 0; s < o.speakers_per_scene; ++s) {
      const std::string speaker =
          std::string(corpus::scene_name(scene)) + "-spk" + std::to_string(s);
      const double f0 = 100.0 + 30.0 * s + 10.0 * scene_index;
      for (int u = 0; u < o.utterances_per_speaker; ++u) {
        std::vector<features::TimeSpan> spans;
        std::string text;
        double t = 0.0;
        const double target = rng.uniform(18.0, 34.0);
        while (t < target) {
          const int chars = 1 + static_cast<int>(rng.below(3));
          const std::string word = cjk_text(chars, rng.below(400));
          const double len = 0.22 * chars + rng.uniform(0.0, 0.1);
          spans.push_back({word, t, t + len});
          text += word;
          t += len;
          const double r = rng.uniform();
          if (r < 0.12) {
            spans.push_back({"\xE3\x80\x82", t, t + 0.15});  // ideographic full stop
            text += "\xE3\x80\x82";
            t += 0.15;
          } else if (r < 0.30) {
            spans.push_back({"\xEF\xBC\x8C", t, t + 0.1});  // fullwidth comma
            text += "\xEF\xBC\x8C";
            t += 0.1;
          }
        }
        spans.push_back({"\xE3\x80\x82", t, t + 0.15});
        text += "\xE3\x80\x82";
        t += 0.15;

        corpus::ManifestEntry e;
        e.id = speaker + "-u" + std::to_string(u);
        e.audio_path = e.id + ".wav";
        e.alignment_path = e.id + ".align";
        e.text = text;
        e.speaker_id = speaker;
        e.scene = scene;
        std::u32string heard = text::decode_utf8(text);
        if (noisy_left > 0 && u == 0) {
          // Heavily corrupted transcript: every second character replaced.
          for (std::size_t k = 0; k < heard.size(); k += 2) {
            if (!text::is_punctuation(heard[k])) heard[k] = U'龠';
          }
          --noisy_left;
        }
        e.transcript = text::encode_utf8(heard);

        features::Waveform w;
        w.samples.resize(static_cast<std::size_t>(t * features::kSampleRate));
        for (std::size_t i = 0; i < w.samples.size(); ++i) {
          w.samples[i] = 0.2 * std::sin(2.0 * std::numbers::pi * f0 * static_cast<double>(i) /
                                        features::kSampleRate);
        }
        e.duration_s = w.duration_s();
        features::write_wav(dir / e.audio_path, w);
        features::write_alignment(dir / *e.alignment_path, spans);
        manifest.push_back(std::move(e));
      }
    }
    ++scene_index;
  }
  const auto path = dir / "manifest.jsonl";
  corpus::save_manifest(path, manifest);
  return path;
}

}  // namespace ptts::testing
