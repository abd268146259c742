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


#include "app/commands.hpp"

#include "app/ablation.hpp"
#include "corpus/pipeline.hpp"
#include "evaluation/metrics.hpp"
#include "features/durations.hpp"
#include "features/feature_cache.hpp"
#include "features/mel.hpp"
#include "features/wav_io.hpp"
#include "inference/griffin_lim.hpp"
#include "inference/synthesizer.hpp"
#include "model/checkpoint.hpp"
#include "training/dataset.hpp"
#include "training/trainer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace ptts::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void log_stderr(const std::string& m) { std::cerr << m << '\n'; }

std::optional<features::FeatureCache> cache_for(const RunConfig& config) {
  const std::string dir = effective_cache_dir(config);
  if (dir.empty()) return std::nullopt;
  return features::FeatureCache(dir);
}

corpus::Manifest select_split(const corpus::Manifest& m, bool test) {
  corpus::Manifest out;
  for (const auto& e : m) {
    if ((e.split == corpus::Split::Test) == test) out.push_back(e);
  }
  return out;
}

void require_manifest(const RunConfig& config) {
  if (config.data.manifest.empty()) throw UsageError("data.manifest is required");
  if (!fs::exists(config.data.manifest)) {
    throw UsageError("data.manifest " + config.data.manifest + " does not exist");
  }
}

}  // namespace

std::string corpus_segment(const SegmentArgs& args) {
  const corpus::Manifest manifest = corpus::load_manifest(args.manifest);
  fs::create_directories(args.out_dir);
  corpus::Manifest out;
  std::map<std::string, int> rule_counts;
  std::size_t skipped = 0;
  for (const auto& e : manifest) {
    if (!e.alignment_path) {
      ++skipped;
      continue;
    }
    std::vector<corpus::AlignedToken> tokens;
    for (const auto& span :
         features::read_alignment(corpus::resolve_path(args.manifest, *e.alignment_path))) {
      tokens.push_back(corpus::make_token(span.label, span.start_s, span.end_s));
    }
    const auto segments = corpus::segment_utterance(tokens, {args.min_s, args.max_s});
    const auto wav = features::read_wav(corpus::resolve_path(args.manifest, e.audio_path));
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto& seg = segments[k];
      ++rule_counts[std::string(corpus::cut_rule_name(seg.rule))];
      const std::string id = e.id + "-" + std::to_string(k);
      const auto first = static_cast<std::size_t>(std::llround(seg.start_s * wav.sample_rate));
      const auto last = std::min(wav.samples.size(),
                                 static_cast<std::size_t>(std::llround(seg.end_s * wav.sample_rate)));
      features::Waveform piece;
      piece.sample_rate = wav.sample_rate;
      if (first < last) piece.samples.assign(wav.samples.begin() + first, wav.samples.begin() + last);
      features::write_wav(args.out_dir / (id + ".wav"), piece);
      std::vector<features::TimeSpan> spans;
      for (std::size_t t = seg.first_token; t <= seg.last_token; ++t) {
        spans.push_back({tokens[t].token, tokens[t].start_s - seg.start_s,
                         tokens[t].end_s - seg.start_s});
      }
      features::write_alignment(args.out_dir / (id + ".align"), spans);
      corpus::ManifestEntry s;
      s.id = id;
      s.audio_path = id + ".wav";
      s.text = seg.text;
      s.speaker_id = e.speaker_id;
      s.scene = e.scene;
      s.duration_s = std::max(seg.duration_s(), 1e-6);
      s.alignment_path = id + ".align";
      out.push_back(std::move(s));
    }
  }
  corpus::save_manifest(args.out_dir / "segments.jsonl", out);
  std::string report = "segments " + std::to_string(out.size()) + " from " +
                       std::to_string(manifest.size()) + " utterances";
  for (const auto& [rule, n] : rule_counts) report += ", " + rule + " " + std::to_string(n);
  if (skipped > 0) report += ", skipped " + std::to_string(skipped) + " without alignment";
  return report + "\n";
}

std::string corpus_filter(const fs::path& manifest, const fs::path& out, double threshold) {
  const auto result = corpus::asr_filter(corpus::load_manifest(manifest), threshold);
  corpus::save_manifest(out, result.kept);
  std::string report = "kept " + std::to_string(result.kept.size()) + ", rejected " +
                       std::to_string(result.rejected.size()) + "\n";
  for (const auto& r : result.rejected) {
    report += "rejected id=" + r.id + " similarity=" + fmt("%.4f", r.similarity) +
              " reason=" + r.reason + "\n";
  }
  return report;
}

std::string corpus_stats(const fs::path& manifest_path, bool with_pitch, bool as_json) {
  const auto manifest = corpus::load_manifest(manifest_path);
  corpus::PitchSource pitch;
  if (with_pitch) {
    for (const auto& e : manifest) {
      const auto wav = features::read_wav(corpus::resolve_path(manifest_path, e.audio_path));
      const auto f = features::extract_features_any_rate(wav);
      pitch[e.id] = {f.pitch_hz, f.voiced};
    }
  }
  const auto report = corpus::scene_statistics(manifest, with_pitch ? &pitch : nullptr);
  if (as_json) {
    json j;
    j["rows"] = json::array();
    for (const auto& r : report.rows) {
      json row = {{"scene", corpus::scene_name(r.scene)},
                  {"hours", r.hours},
                  {"clips", r.clip_count},
                  {"speed_cpm", r.speed_cpm}};
      if (r.pitch_mean_hz) row["pitch_mean_hz"] = *r.pitch_mean_hz;
      if (r.pitch_var) row["pitch_var"] = *r.pitch_var;
      if (r.pitch_skew) row["pitch_skew"] = *r.pitch_skew;
      j["rows"].push_back(row);
    }
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
  }
  std::string out;
  char line[200];
  std::snprintf(line, sizeof line, "%-14s %8s %8s %8s %10s %10s %8s\n", "scene", "hours", "clips",
                "speed", "pitch_mean", "pitch_var", "skew");
  out += line;
  for (const auto& r : report.rows) {
    auto opt = [](const std::optional<double>& v) {
      return v ? fmt("%.2f", *v) : std::string("-");
    };
    std::snprintf(line, sizeof line, "%-14s %8.2f %8zu %8.1f %10s %10s %8s\n",
                  std::string(corpus::scene_name(r.scene)).c_str(), r.hours, r.clip_count,
                  r.speed_cpm, opt(r.pitch_mean_hz).c_str(), opt(r.pitch_var).c_str(),
                  opt(r.pitch_skew).c_str());
    out += line;
  }
  for (const auto& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string corpus_split(const fs::path& manifest, const fs::path& out, std::uint64_t seed) {
  const auto result = corpus::split_train_test(corpus::load_manifest(manifest), seed);
  corpus::save_manifest(out, result.manifest);
  std::string report;
  for (const auto& [scene, speaker] : result.test_speakers) {
    report += "test speaker " + std::string(corpus::scene_name(scene)) + "=" + speaker + "\n";
  }
  for (const auto& w : result.warnings) report += "warning: " + w + "\n";
  return report;
}

std::string features_extract(const fs::path& manifest_path, const std::string& cache_dir) {
  if (cache_dir.empty()) throw UsageError("a cache directory is required");
  const auto manifest = corpus::load_manifest(manifest_path);
  features::FeatureCache cache(cache_dir);
  std::size_t computed = 0, reused = 0;
  for (const auto& e : manifest) {
    if (cache.load(e.id)) {
      ++reused;
      continue;
    }
    const auto wav = features::read_wav(corpus::resolve_path(manifest_path, e.audio_path));
    cache.store(e.id, features::extract_features_any_rate(wav));
    ++computed;
  }
  return "features computed " + std::to_string(computed) + ", cached " + std::to_string(reused) +
         " in " + cache_dir + "\n";
}

std::string train(const RunConfig& config, const std::string& mode) {
  if (mode != "pretrain" && mode != "finetune") {
    throw UsageError("unknown training mode '" + mode + "'");
  }
  config.validate();
  require_manifest(config);
  const fs::path run_dir = config.data.run_dir;
  fs::create_directories(run_dir);
  write_text(run_dir / "config.txt", dump_run_config(config));

  const auto manifest = select_split(corpus::load_manifest(config.data.manifest), false);
  if (manifest.empty()) throw UsageError("no training entries in " + config.data.manifest);

  auto options = config.training_options();
  options.run_dir = run_dir;
  options.log = log_stderr;
  std::vector<training::LossReport> history;
  long step_count = 0;

  if (mode == "pretrain") {
    const auto inventory = training::inventory_from_manifest(manifest);
    const auto data = training::build_dataset(manifest, config.data.manifest, inventory,
                                              config.model, cache_for(config));
    for (const auto& w : data.warnings) log_stderr("warning: " + w);
    model::TtsModel m(config.model, *config.training.seed);
    training::Trainer trainer(m, data, options);
    history = trainer.run(config.training.steps);
    step_count = trainer.step();
  } else {
    if (config.data.init_checkpoint.empty()) {
      throw UsageError("finetuning requires data.init_checkpoint");
    }
    const auto init = model::load_checkpoint(config.data.init_checkpoint);
    model::TtsModel m(config.model, *config.training.seed);
    model::load_weights(config.data.init_checkpoint, m);
    const inference::PhonemeInventory inventory(init.phoneme_symbols);
    const auto data = training::build_dataset(manifest, config.data.manifest, inventory,
                                              config.model, cache_for(config));
    for (const auto& w : data.warnings) log_stderr("warning: " + w);
    if (config.training.steps > config.training.finetune_steps) {
      log_stderr("warning: finetuning capped at " + std::to_string(config.training.finetune_steps) +
                 " steps");
    }
    history = training::finetune(m, data, options, std::max(1L, config.training.steps));
    step_count = static_cast<long>(history.size());
  }
  std::string out = mode + " finished: " + std::to_string(step_count) + " steps";
  if (!history.empty()) out += ", final loss " + fmt("%.6f", history.back().total);
  return out + ", checkpoint " + (run_dir / "final.ckpt").string() + "\n";
}

std::string ablation(const RunConfig& config, const std::string& variants, bool as_json) {
  config.validate();
  require_manifest(config);
  const auto list = parse_variant_list(variants);
  const auto manifest = corpus::load_manifest(config.data.manifest);
  auto train_entries = select_split(manifest, false);
  corpus::Manifest eval_entries;
  fs::path eval_path = config.data.manifest;
  if (!config.data.eval_manifest.empty()) {
    eval_path = config.data.eval_manifest;
    eval_entries = corpus::load_manifest(eval_path);
  } else {
    eval_entries = select_split(manifest, true);
  }
  std::vector<std::string> notes;
  if (eval_entries.empty()) {
    eval_entries = train_entries;
    notes.push_back("no held-out entries; evaluating on the training entries");
  }
  corpus::Manifest all = train_entries;
  all.insert(all.end(), eval_entries.begin(), eval_entries.end());
  const auto inventory = training::inventory_from_manifest(all);
  const auto cache = cache_for(config);
  const auto train_data =
      training::build_dataset(train_entries, config.data.manifest, inventory, config.model, cache);
  const auto eval_data =
      training::build_dataset(eval_entries, eval_path, inventory, config.model, cache);
  auto report = run_ablation(config, list, train_data, eval_data, log_stderr);
  report.warnings.insert(report.warnings.begin(), notes.begin(), notes.end());

  const fs::path run_dir = config.data.run_dir;
  write_text(run_dir / "ablation.txt", format_ablation_table(report));
  write_text(run_dir / "ablation.json", ablation_json(report) + "\n");
  return as_json ? ablation_json(report) + "\n" : format_ablation_table(report);
}

inference::SynthesisResult synthesize_with(const model::Checkpoint& checkpoint,
                                           const SynthArgs& args) {
  const inference::PhonemeInventory inventory(checkpoint.phoneme_symbols);
  inference::SynthesisRequest req;
  req.text = args.text;
  if (!args.phonemes.empty()) req.phonemes = args.phonemes;
  req.timbre_ref = inference::reference_features(features::read_wav(args.timbre_ref));
  req.prosody_ref = inference::reference_features(features::read_wav(args.prosody_ref));
  if (!args.prosody_ref_phonemes.empty()) {
    req.prosody_ref_phonemes = args.prosody_ref_phonemes;
  } else if (!args.prosody_ref_text.empty()) {
    req.prosody_ref_phonemes = inference::g2p(args.prosody_ref_text, inventory);
  }
  if (!args.prosody_ref_alignment.empty()) {
    req.prosody_ref_alignment = features::read_alignment(args.prosody_ref_alignment);
  }
  req.seed = args.seed;
  auto result = inference::synthesize(req, *checkpoint.model, inventory);
  for (const auto& w : result.warnings) log_stderr("warning: " + w);
  return result;
}

std::string write_synthesis(const inference::SynthesisResult& result, const fs::path& out,
                            int griffin_lim_iterations, std::uint64_t seed) {
  if (out.empty()) throw UsageError("an output path is required");
  const auto ext = out.extension().string();
  if (ext != ".bin" && ext != ".wav") throw UsageError("output must end in .bin or .wav");
  if (griffin_lim_iterations < 1) throw UsageError("Griffin-Lim needs at least 1 iteration");
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  if (ext == ".bin") {
    features::write_mel(out, result.mel);
  } else {
    features::write_wav(out, inference::griffin_lim(result.mel, griffin_lim_iterations, seed));
  }
  return "wrote " + out.string() + ": " + std::to_string(result.mel.frames()) +
         " frames (prompt " + std::to_string(result.prompt_frames) + " frames cropped)\n";
}

std::string synth(const SynthArgs& args) {
  const auto ext = args.out.extension().string();
  if (ext != ".bin" && ext != ".wav") throw UsageError("output must end in .bin or .wav");
  const auto ckpt = model::load_checkpoint(args.checkpoint);
  return write_synthesis(synthesize_with(ckpt, args), args.out, args.griffin_lim_iterations,
                         args.seed);
}

std::string eval_prosody(const fs::path& gen_dir, const fs::path& ref_dir, bool as_json,
                         const fs::path& out) {
  if (!fs::is_directory(gen_dir)) throw UsageError(gen_dir.string() + " is not a directory");
  if (!fs::is_directory(ref_dir)) throw UsageError(ref_dir.string() + " is not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(gen_dir)) {
    if (entry.path().extension() == ".wav") names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) throw UsageError("no .wav files in " + gen_dir.string());
  std::vector<evaluation::TrackSet> gen, ref;
  auto tracks = [](const fs::path& p) {
    const auto f = features::extract_features_any_rate(features::read_wav(p));
    return evaluation::TrackSet{f.pitch_hz, f.voiced, f.energy};
  };
  for (const auto& n : names) {
    if (!fs::exists(ref_dir / n)) throw UsageError("no reference for " + n + " in " + ref_dir.string());
    gen.push_back(tracks(gen_dir / n));
    ref.push_back(tracks(ref_dir / n));
  }
  const auto d = evaluation::prosody_distance(gen, ref);

  std::string text;
  if (as_json) {
    auto diff = [](const evaluation::StatDifference& s) {
      return json{{"mean", s.mean}, {"std", s.std}, {"skew", s.skew}, {"kurt", s.kurt}};
    };
    json j;
    j["pairs"] = d.pairs;
    j["pitch_pairs"] = d.pitch_pairs;
    j["pitch"] = diff(d.pitch);
    j["energy"] = diff(d.energy);
    j["per_pair"] = json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
      json p = {{"name", names[i]}, {"energy", diff(d.per_pair[i].energy)}};
      if (d.per_pair[i].pitch_valid) p["pitch"] = diff(d.per_pair[i].pitch);
      j["per_pair"].push_back(p);
    }
    text = j.dump(2) + "\n";
  } else {
    char line[200];
    std::snprintf(line, sizeof line, "%-8s %12s %12s %12s %12s\n", "track", "mean", "std", "skew",
                  "kurt");
    text += line;
    std::snprintf(line, sizeof line, "%-8s %12.6f %12.6f %12.6f %12.6f\n", "pitch", d.pitch.mean,
                  d.pitch.std, d.pitch.skew, d.pitch.kurt);
    text += line;
    std::snprintf(line, sizeof line, "%-8s %12.6f %12.6f %12.6f %12.6f\n", "energy", d.energy.mean,
                  d.energy.std, d.energy.skew, d.energy.kurt);
    text += line;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto& p = d.per_pair[i];
      text += "pair name=" + names[i];
      if (p.pitch_valid) {
        text += " pitch_mean=" + fmt("%.6f", p.pitch.mean) + " pitch_std=" +
                fmt("%.6f", p.pitch.std) + " pitch_skew=" + fmt("%.6f", p.pitch.skew) +
                " pitch_kurt=" + fmt("%.6f", p.pitch.kurt);
      }
      text += " energy_mean=" + fmt("%.6f", p.energy.mean) + " energy_std=" +
              fmt("%.6f", p.energy.std) + " energy_skew=" + fmt("%.6f", p.energy.skew) +
              " energy_kurt=" + fmt("%.6f", p.energy.kurt) + "\n";
    }
  }
  if (!out.empty()) write_text(out, text);
  return text;
}

double eval_speaker(const fs::path& checkpoint, const fs::path& a, const fs::path& b) {
  const auto ckpt = model::load_checkpoint(checkpoint);
  return evaluation::speaker_similarity(features::read_wav(a), features::read_wav(b), *ckpt.model);
}

}  // namespace ptts::app
