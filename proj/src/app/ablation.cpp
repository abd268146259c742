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


#include "app/ablation.hpp"

#include "inference/synthesizer.hpp"
#include "training/masking.hpp"
#include "training/trainer.hpp"

#include <json.hpp>

#include <cstdio>
#include <cctype>
#include <set>

namespace ptts::app {

namespace {

features::UtteranceFeatures slice_features(const features::UtteranceFeatures& f,
                                           Eigen::Index start, Eigen::Index count) {
  features::UtteranceFeatures out;
  out.mel.values = f.mel.values.middleRows(start, count);
  out.mel.hop_s = f.mel.hop_s;
  const auto s = static_cast<std::size_t>(start);
  const auto e = static_cast<std::size_t>(start + count);
  out.pitch_hz.assign(f.pitch_hz.begin() + s, f.pitch_hz.begin() + e);
  out.voiced.assign(f.voiced.begin() + s, f.voiced.begin() + e);
  out.energy.assign(f.energy.begin() + s, f.energy.begin() + e);
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

TransferEvaluation evaluate_prompt_transfer(const model::TtsModel& model,
                                            const training::Dataset& data, double mask_ratio,
                                            std::uint64_t seed) {
  TransferEvaluation out;
  std::vector<evaluation::TrackSet> gen, ref;
  double asv_sum = 0.0;
  for (std::size_t i = 0; i < data.items.size(); ++i) {
    const auto& u = data.items[i];
    const std::size_t boundary = training::posterior_boundary(u.frames(), mask_ratio);
    std::size_t k = 0;
    int prompt_frames = 0;
    while (k + 1 < u.durations.size() &&
           static_cast<std::size_t>(prompt_frames + u.durations[k]) <= boundary) {
      prompt_frames += u.durations[k];
      ++k;
    }
    if (k == 0 || prompt_frames < model::kMinReferenceFrames) {
      out.warnings.push_back(u.id + ": prompt region too short, skipped");
      continue;
    }
    const int target_frames = static_cast<int>(u.frames()) - prompt_frames;

    Rng rng(derive_seed(seed, "eval.reference" + std::to_string(i)));
    const std::size_t timbre = training::choose_reference(data, i, model::Variant::Baseline, rng);

    inference::SynthesisRequest req;
    const auto& symbols = data.inventory.symbols();
    std::vector<std::string> prompt_symbols, target_symbols;
    for (std::size_t p = 0; p < u.phoneme_ids.size(); ++p) {
      (p < k ? prompt_symbols : target_symbols).push_back(symbols[u.phoneme_ids[p]]);
    }
    req.phonemes = target_symbols;
    req.prosody_ref_phonemes = prompt_symbols;
    req.prosody_ref_durations = std::vector<int>(u.durations.begin(), u.durations.begin() + k);
    req.prosody_ref = slice_features(u.raw, 0, prompt_frames);
    req.timbre_ref = data.items[timbre].raw;
    req.seed = derive_seed(seed, "eval.synth" + std::to_string(i));
    const auto result = inference::synthesize(req, model, data.inventory);

    evaluation::TrackSet g;
    g.pitch_hz = result.pitch_hz;
    g.voiced.assign(result.pitch_hz.size(), true);
    g.energy = result.energy;
    const auto target = slice_features(u.raw, prompt_frames, target_frames);
    evaluation::TrackSet r{target.pitch_hz, target.voiced, target.energy};
    gen.push_back(std::move(g));
    ref.push_back(std::move(r));

    if (result.mel.frames() >= model::kMinReferenceFrames &&
        target.mel.frames() >= model::kMinReferenceFrames) {
      asv_sum += evaluation::speaker_similarity(result.mel.values, target.mel.values, model);
      ++out.asv_pairs;
    }
    ++out.utterances;
  }
  if (out.utterances == 0) throw training::TrainingError("no utterance could be evaluated");
  out.prosody = evaluation::prosody_distance(gen, ref);
  out.asv = out.asv_pairs > 0 ? asv_sum / static_cast<double>(out.asv_pairs) : 0.0;
  return out;
}

std::vector<model::Variant> parse_variant_list(std::string_view list) {
  std::vector<model::Variant> out;
  std::set<model::Variant> seen;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    auto name = list.substr(start, comma == std::string_view::npos ? list.npos : comma - start);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.remove_prefix(1);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
    if (!name.empty()) {
      try {
        const auto v = model::parse_variant(name);
        if (seen.insert(v).second) out.push_back(v);
      } catch (const model::ConfigError& e) {
        throw UsageError(e.what());
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.size() < 2) throw UsageError("an ablation needs at least two distinct variants");
  return out;
}

AblationReport run_ablation(const RunConfig& base, const std::vector<model::Variant>& variants,
                            const training::Dataset& train, const training::Dataset& eval,
                            const std::function<void(const std::string&)>& log) {
  base.validate();
  if (variants.size() < 2) throw UsageError("an ablation needs at least two variants");
  AblationReport report;
  report.train_utterances = train.items.size();
  report.eval_utterances = eval.items.size();
  report.steps = base.training.steps;
  const std::uint64_t seed = *base.training.seed;
  for (model::Variant v : variants) {
    model::ModelConfig cfg = base.model;
    cfg.variant = v;
    model::TtsModel m(cfg, seed);
    auto options = base.training_options();
    options.log = log;
    if (!options.log) options.log = [](const std::string&) {};
    training::Trainer trainer(m, train, options);
    const auto history = trainer.run(base.training.steps);
    const auto result = evaluate_prompt_transfer(m, eval, base.training.mask_ratio, seed);
    AblationRow row;
    row.variant = v;
    row.asv = result.asv;
    row.pitch = result.prosody.pitch;
    row.final_loss = history.empty() ? 0.0 : history.back().total;
    report.rows.push_back(row);
    for (const auto& w : result.warnings) {
      report.warnings.push_back(std::string(model::variant_name(v)) + ": " + w);
    }
    if (log) {
      log(std::string(model::variant_name(v)) + ": pitch mean diff " + fmt(row.pitch.mean) +
          ", asv " + fmt(row.asv));
    }
  }
  return report;
}

std::string format_ablation_table(const AblationReport& report) {
  std::string out;
  char line[200];
  std::snprintf(line, sizeof line, "%-16s %10s %10s %10s %10s %10s\n", "variant", "asv",
                "pitch_mean", "pitch_std", "pitch_skew", "pitch_kurt");
  out += line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-16s %10.6f %10.6f %10.6f %10.6f %10.6f\n",
                  std::string(model::variant_name(r.variant)).c_str(), r.asv, r.pitch.mean,
                  r.pitch.std, r.pitch.skew, r.pitch.kurt);
    out += line;
  }
  return out;
}

std::string ablation_json(const AblationReport& report) {
  nlohmann::ordered_json j;
  j["train_utterances"] = report.train_utterances;
  j["eval_utterances"] = report.eval_utterances;
  j["steps"] = report.steps;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"variant", model::variant_name(r.variant)},
                         {"asv", r.asv},
                         {"pitch_mean", r.pitch.mean},
                         {"pitch_std", r.pitch.std},
                         {"pitch_skew", r.pitch.skew},
                         {"pitch_kurt", r.pitch.kurt},
                         {"final_loss", r.final_loss}});
  }
  j["warnings"] = report.warnings;
  return j.dump(2);
}

}  // namespace ptts::app
