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


#include "training/trainer.hpp"

#include "model/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace ptts::training {

using model::ProsodyKind;
using nn::Tensor;

std::vector<std::pair<std::string, double>> LossReport::components() const {
  return {{"duration", duration}, {"pitch", pitch}, {"energy", energy}, {"diffusion", diffusion}};
}

std::size_t choose_reference(const Dataset& data, std::size_t index, model::Variant variant,
                             Rng& rng, bool* fell_back) {
  if (fell_back) *fell_back = false;
  if (variant == model::Variant::ParallelSpk) return index;
  const auto& same = data.by_speaker.at(data.items.at(index).speaker_id);
  if (same.size() < 2) {
    if (fell_back) *fell_back = true;
    return index;
  }
  std::size_t pick = rng.below(same.size() - 1);
  if (same[pick] == index) pick = same.size() - 1;
  return same[pick];
}

BatchLoss compute_batch_loss(const model::TtsModel& model, const Dataset& data,
                             std::span<const std::size_t> batch, const MaskSpec& mask,
                             std::uint64_t seed,
                             const std::function<void(const std::string&)>& warn) {
  if (batch.empty()) throw TrainingError("empty batch");
  const auto& cfg = model.config();
  Tensor total;
  LossReport report;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const TrainingUtterance& u = data.items.at(batch[b]);
    Rng rng(derive_seed(seed, "utterance" + std::to_string(b)));

    bool fell_back = false;
    const std::size_t ref = choose_reference(data, batch[b], cfg.variant, rng, &fell_back);
    if (fell_back && warn) {
      warn("speaker " + u.speaker_id + " has a single utterance; using it as its own reference");
    }
    Tensor speaker = model.timbre_encode(data.items[ref].raw.mel.values);

    const std::vector<bool> frame_mask = build_mask(u.frames(), mask, rng);
    const std::vector<bool> phone_mask = mask_durations(u.durations, frame_mask);

    model::PredictorContext ctx;
    ctx.speaker = speaker;
    if (cfg.variant == model::Variant::Ns2Prompting) {
      std::vector<int> visible;
      for (std::size_t i = 0; i < frame_mask.size(); ++i) {
        if (!frame_mask[i]) visible.push_back(static_cast<int>(i));
      }
      ctx.prompt_mel.resize(static_cast<Eigen::Index>(visible.size()), cfg.n_mels);
      for (std::size_t k = 0; k < visible.size(); ++k) {
        ctx.prompt_mel.row(static_cast<Eigen::Index>(k)) = u.mel_normalized.row(visible[k]);
      }
    }
    auto prompt_of = [](const nn::Matrix& values, const std::vector<bool>& m) {
      model::PromptTrack p;
      p.mask = m;
      p.values.resize(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) {
        p.values[i] = m[i] ? 0.0 : values(static_cast<Eigen::Index>(i), 0);
      }
      return p;
    };

    auto h = model.style_adaptive_encode(model.linguistic_encode(u.phoneme_ids));
    Tensor dur_pred = model.predict_prosody(ProsodyKind::Duration, h,
                                            prompt_of(u.duration_feature, phone_mask), ctx);
    Tensor dur_loss = mpp_loss(dur_pred, u.duration_feature, phone_mask);

    auto h_frame = model.length_regulate(h, u.durations);
    Tensor pitch_pred = model.predict_prosody(ProsodyKind::Pitch, h_frame,
                                              prompt_of(u.pitch_feature, frame_mask), ctx);
    Tensor pitch_loss = mpp_loss(pitch_pred, u.pitch_feature, frame_mask);
    Tensor energy_pred = model.predict_prosody(ProsodyKind::Energy, h_frame,
                                               prompt_of(u.energy_feature, frame_mask), ctx);
    Tensor energy_loss = mpp_loss(energy_pred, u.energy_feature, frame_mask);

    Tensor cond = model.decoder_condition(h_frame, nn::constant(u.pitch_feature),
                                          nn::constant(u.energy_feature), speaker);
    const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.diffusion_steps)));
    nn::Matrix noise(u.mel_normalized.rows(), u.mel_normalized.cols());
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = rng.normal();
    Tensor diff_loss = model.diffusion_loss(u.mel_normalized, cond, t, noise);

    Tensor sum = nn::add(nn::add(dur_loss, pitch_loss), nn::add(energy_loss, diff_loss));
    total = total.defined() ? nn::add(total, sum) : sum;
    report.duration += dur_loss.item();
    report.pitch += pitch_loss.item();
    report.energy += energy_loss.item();
    report.diffusion += diff_loss.item();
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  total = nn::scale(total, inv);
  report.duration *= inv;
  report.pitch *= inv;
  report.energy *= inv;
  report.diffusion *= inv;
  report.total = total.item();
  return {total, report};
}

Trainer::Trainer(model::TtsModel& model, const Dataset& data, TrainingOptions options)
    : model_(model),
      data_(data),
      options_(std::move(options)),
      optimizer_(options_.adam),
      batch_rng_(derive_seed(options_.seed, "trainer.batches")) {
  if (options_.batch_size <= 0) throw TrainingError("batch size must be positive");
  if (data_.items.empty()) throw TrainingError("no training utterances");
  if (!options_.log) {
    options_.log = [](const std::string& m) { std::cerr << m << '\n'; };
  }
}

void Trainer::warn(const std::string& message) {
  if (!warned_.insert(message).second) return;
  warnings_.push_back(message);
  options_.log("warning: " + message);
}

LossReport Trainer::train_step() {
  std::vector<std::size_t> batch(static_cast<std::size_t>(options_.batch_size));
  for (auto& b : batch) b = batch_rng_.below(data_.items.size());
  return train_step(batch);
}

LossReport Trainer::train_step(std::span<const std::size_t> batch) {
  const std::uint64_t seed = derive_seed(options_.seed, "step" + std::to_string(step()));
  model_.parameters().zero_grad();
  BatchLoss loss = compute_batch_loss(model_, data_, batch, options_.mask, seed,
                                      [this](const std::string& m) { warn(m); });
  nn::backward(loss.total);
  loss.report.learning_rate = optimizer_.step(model_.parameters(), options_.frozen);
  return loss.report;
}

void Trainer::save(const std::filesystem::path& path) const {
  model::save_checkpoint(path, model_, data_.inventory.symbols(), step());
}

std::vector<LossReport> Trainer::run(long steps) {
  std::ofstream metrics;
  if (options_.run_dir) {
    std::filesystem::create_directories(*options_.run_dir / "checkpoints");
    metrics.open(*options_.run_dir / "metrics.log", std::ios::app);
    if (!metrics) throw TrainingError("cannot open metrics log in " + options_.run_dir->string());
  }
  std::vector<LossReport> history;
  history.reserve(static_cast<std::size_t>(std::max(steps, 0L)));
  for (long i = 0; i < steps; ++i) {
    LossReport r = train_step();
    history.push_back(r);
    const long s = step();
    if (metrics.is_open()) {
      char line[256];
      std::snprintf(line, sizeof line,
                    "step=%ld duration=%.6g pitch=%.6g energy=%.6g diffusion=%.6g total=%.6g "
                    "lr=%.6g\n",
                    s, r.duration, r.pitch, r.energy, r.diffusion, r.total, r.learning_rate);
      metrics << line << std::flush;
    }
    if (options_.log_every > 0 && s % options_.log_every == 0) {
      char line[160];
      std::snprintf(line, sizeof line, "step %ld total %.4f (dur %.4f pitch %.4f energy %.4f diff %.4f)",
                    s, r.total, r.duration, r.pitch, r.energy, r.diffusion);
      options_.log(line);
    }
    if (options_.run_dir && options_.checkpoint_every > 0 && s % options_.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "step-%07ld.ckpt", s);
      save(*options_.run_dir / "checkpoints" / name);
    }
  }
  if (options_.run_dir) save(*options_.run_dir / "final.ckpt");
  return history;
}

std::vector<LossReport> finetune(model::TtsModel& model, const Dataset& data,
                                 TrainingOptions options, long steps_budget) {
  if (steps_budget <= 0) throw TrainingError("finetune step budget must be positive");
  if (options.finetune_cap <= 0) throw TrainingError("finetune step cap must be positive");
  const long steps = std::min(steps_budget, options.finetune_cap);
  options.frozen.insert(kFinetuneFrozen.begin(), kFinetuneFrozen.end());
  Trainer trainer(model, data, std::move(options));
  return trainer.run(steps);
}

}  // namespace ptts::training
