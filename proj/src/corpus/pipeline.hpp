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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ptts::corpus {

// --- segmentation ----------------------------------------------------------

struct AlignedToken {
  std::string token;
  double start_s = 0.0;
  double end_s = 0.0;
  bool is_stop_punct = false;
  bool is_minor_punct = false;
};

/// Builds a token and fills its punctuation flags from its text.
AlignedToken make_token(std::string token, double start_s, double end_s);

struct SegmentWindow {
  double min_s = 5.0;
  double max_s = 10.0;
};

enum class CutRule {
  Stop,      // latest stop-punctuation cut inside the window
  Minor,     // latest minor-punctuation cut inside the window
  Nearest,   // no admissible cut: punctuation nearest to the window
  NoCutPoint // utterance without any punctuation
};

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
  std::size_t first_token = 0;
  std::size_t last_token = 0;  // inclusive
  CutRule rule = CutRule::Stop;
  bool below_window = false;
  bool above_window = false;

  double duration_s() const { return end_s - start_s; }
  bool admissible() const { return rule == CutRule::Stop || rule == CutRule::Minor; }
};

std::string_view cut_rule_name(CutRule rule);

/// Greedy left-to-right segmentation. The end of the utterance counts as a
/// stop-level cut. Throws CorpusError on an empty token list.
std::vector<Segment> segment_utterance(const std::vector<AlignedToken>& tokens,
                                       SegmentWindow window = {});

// --- ASR similarity filtering ----------------------------------------------

/// Removes punctuation and whitespace and folds case.
std::u32string normalize_for_similarity(std::string_view s);
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);
/// 1 - edit distance / max length over normalised strings; 1 when both empty.
double text_similarity(std::string_view a, std::string_view b);

struct Rejection {
  std::string id;
  double similarity = 0.0;  // 0 when there is no transcript
  std::string reason;       // "below-threshold" or "no-transcript"
};

struct FilterResult {
  Manifest kept;
  std::vector<Rejection> rejected;
};

/// Keeps entries whose similarity is >= threshold.
FilterResult asr_filter(const Manifest& entries, double threshold = 0.8);

// --- statistics -------------------------------------------------------------

struct PitchSeries {
  std::vector<double> pitch_hz;
  std::vector<bool> voiced;
};
using PitchSource = std::map<std::string, PitchSeries>;  // keyed by entry id

struct SceneStats {
  Scene scene = Scene::Other;
  double hours = 0.0;
  std::size_t clip_count = 0;
  double speed_cpm = 0.0;
  std::optional<double> pitch_mean_hz;
  std::optional<double> pitch_var;
  std::optional<double> pitch_skew;
};

struct SceneStatsReport {
  std::vector<SceneStats> rows;
  std::vector<std::string> warnings;
};

/// Number of characters counted towards speaking rate (punctuation and
/// whitespace excluded).
std::size_t spoken_characters(std::string_view text);

/// One row per declared scene (Other only when present). Pitch fields are
/// filled when `pitch` carries voiced frames for the scene: moments are taken
/// per speaker over pooled voiced frames and then averaged across speakers.
SceneStatsReport scene_statistics(const Manifest& manifest, const PitchSource* pitch = nullptr);

// --- train/test split -------------------------------------------------------

struct SplitResult {
  Manifest manifest;
  std::map<Scene, std::string> test_speakers;
  std::vector<std::string> warnings;
};

/// Seeded choice of one test speaker per scene; a speaker already chosen for
/// an earlier scene is skipped while alternatives remain.
SplitResult split_train_test(const Manifest& manifest, std::uint64_t seed);

}  // namespace ptts::corpus
