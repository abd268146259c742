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
#include "util/random.hpp"

#include <set>

namespace ptts::corpus {

SplitResult split_train_test(const Manifest& manifest, std::uint64_t seed) {
  SplitResult result;
  result.manifest = manifest;
  Rng rng(derive_seed(seed, "corpus.split"));

  std::set<std::string> already_chosen;
  for (Scene scene : kAllScenes) {
    std::set<std::string> speakers;
    for (const ManifestEntry& e : manifest) {
      if (e.scene == scene) speakers.insert(e.speaker_id);
    }
    if (speakers.empty()) continue;

    std::vector<std::string> candidates;
    for (const std::string& s : speakers) {
      if (already_chosen.count(s) == 0) candidates.push_back(s);
    }
    if (candidates.empty()) candidates.assign(speakers.begin(), speakers.end());
    const std::string chosen = candidates[rng.below(candidates.size())];
    already_chosen.insert(chosen);
    result.test_speakers[scene] = chosen;
    if (speakers.size() == 1) {
      result.warnings.push_back("scene " + std::string(scene_name(scene)) +
                                " has a single speaker; it has no training speakers");
    }
  }

  for (ManifestEntry& e : result.manifest) {
    auto it = result.test_speakers.find(e.scene);
    e.split = (it != result.test_speakers.end() && it->second == e.speaker_id) ? Split::Test
                                                                               : Split::Train;
  }
  return result;
}

}  // namespace ptts::corpus
