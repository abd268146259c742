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

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptts::corpus {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scene { Chat, News, QA, Storytelling, Other };
enum class Split { Train, Test, Unassigned };

inline constexpr Scene kAllScenes[] = {Scene::Chat, Scene::News, Scene::QA, Scene::Storytelling,
                                       Scene::Other};

std::string_view scene_name(Scene scene);
Scene parse_scene(std::string_view name);
std::string_view split_name(Split split);
Split parse_split(std::string_view name);

struct ManifestEntry {
  std::string id;
  std::string audio_path;
  std::string text;
  std::vector<std::string> phonemes;  // empty when not supplied
  std::string speaker_id;
  Scene scene = Scene::Other;
  double duration_s = 0.0;
  Split split = Split::Unassigned;
  std::optional<std::string> alignment_path;
  std::optional<std::string> transcript;

  bool operator==(const ManifestEntry&) const = default;
};

using Manifest = std::vector<ManifestEntry>;

/// Checks per-entry invariants and id uniqueness.
void validate_manifest(const Manifest& manifest);

/// One JSON object per line with keys id, audio, text, phonemes, speaker,
/// scene, duration, split, alignment, transcript. Optional keys are omitted
/// when unset. Blank lines are ignored.
Manifest parse_manifest(std::string_view contents, std::string_view origin = "<memory>");
std::string format_manifest(const Manifest& manifest);
std::string format_entry(const ManifestEntry& entry);

Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Resolves an entry-relative path against the manifest's directory.
std::filesystem::path resolve_path(const std::filesystem::path& manifest_path,
                                   const std::string& entry_path);

}  // namespace ptts::corpus
