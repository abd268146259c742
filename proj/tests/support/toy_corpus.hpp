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

// Synthetic aligned corpora for tests: harmonic "speech" with known pitch
// contours, per-speaker spectral envelopes and per-utterance pitch level.

#include "corpus/manifest.hpp"
#include "features/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ptts::testing {

struct ToyCorpusOptions {
  int utterances = 20;
  int speakers = 2;
  int test_per_speaker = 0;  // trailing utterances of each speaker marked Test
  std::uint64_t seed = 1;
  int min_phonemes = 8;
  int max_phonemes = 14;
  int min_frames = 5;
  int max_frames = 12;
  double style_lo = 0.85;  // per-utterance pitch-level factor range
  double style_hi = 1.2;
};

struct ToyUtterance {
  std::string id;
  std::string speaker;
  std::vector<std::string> phonemes;
  std::vector<int> durations;   // frames
  std::vector<double> f0_hz;    // synthesis contour, one value per frame
  double style = 1.0;
  features::Waveform wav;
};

inline const std::vector<std::string> kToyPhonemes = {"a", "e", "i", "o", "u", "m", "n", "l"};

double toy_speaker_base_hz(int speaker);

std::vector<ToyUtterance> make_toy_utterances(const ToyCorpusOptions& options);

/// Writes audio, phoneme alignments and manifest.jsonl into `dir`; returns
/// the manifest path.
std::filesystem::path write_toy_corpus(const std::filesystem::path& dir,
                                       const std::vector<ToyUtterance>& utterances,
                                       int test_per_speaker = 0);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace ptts::testing
