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

#include "app/run_config.hpp"
#include "inference/synthesizer.hpp"
#include "model/checkpoint.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ptts::app {

// Each command returns human-readable output for stdout and throws on error.

struct SegmentArgs {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;  // cut audio, alignments and segments.jsonl
  double min_s = 5.0;
  double max_s = 10.0;
};
std::string corpus_segment(const SegmentArgs& args);

std::string corpus_filter(const std::filesystem::path& manifest, const std::filesystem::path& out,
                          double threshold);

/// with_pitch extracts pitch from every clip for the pitch columns.
std::string corpus_stats(const std::filesystem::path& manifest, bool with_pitch, bool json);

std::string corpus_split(const std::filesystem::path& manifest, const std::filesystem::path& out,
                         std::uint64_t seed);

std::string features_extract(const std::filesystem::path& manifest,
                             const std::string& cache_dir);

/// mode: "pretrain" or "finetune". Writes the config snapshot, metrics log
/// and checkpoints into data.run_dir.
std::string train(const RunConfig& config, const std::string& mode);

/// variants: comma-separated. Writes ablation.txt / ablation.json into
/// data.run_dir as well as returning the report.
std::string ablation(const RunConfig& config, const std::string& variants, bool json);

struct SynthArgs {
  std::filesystem::path checkpoint;
  std::string text;
  std::vector<std::string> phonemes;  // empty: G2P on text
  std::filesystem::path timbre_ref;
  std::filesystem::path prosody_ref;
  std::string prosody_ref_text;
  std::vector<std::string> prosody_ref_phonemes;
  std::filesystem::path prosody_ref_alignment;
  std::uint64_t seed = 0;
  std::filesystem::path out;  // .bin for mel, .wav for Griffin-Lim audio
  int griffin_lim_iterations = 60;
};
std::string synth(const SynthArgs& args);

/// Runs a request against an already loaded checkpoint; `args.checkpoint`
/// and `args.out` are ignored.
inference::SynthesisResult synthesize_with(const model::Checkpoint& checkpoint,
                                           const SynthArgs& args);
/// Writes a result as .bin mel or .wav audio; returns the summary line.
std::string write_synthesis(const inference::SynthesisResult& result,
                            const std::filesystem::path& out, int griffin_lim_iterations,
                            std::uint64_t seed);

/// Pairs same-named .wav files of the two directories. `out` (optional)
/// receives the report as well.
std::string eval_prosody(const std::filesystem::path& gen_dir,
                         const std::filesystem::path& ref_dir, bool json,
                         const std::filesystem::path& out = {});

double eval_speaker(const std::filesystem::path& checkpoint, const std::filesystem::path& a,
                    const std::filesystem::path& b);

}  // namespace ptts::app
