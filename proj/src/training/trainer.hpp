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

#include "model/tts_model.hpp"
#include "nn/optimizer.hpp"
#include "training/dataset.hpp"
#include "training/masking.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace ptts::training {

struct LossReport {
  double duration = 0.0;
  double pitch = 0.0;
  double energy = 0.0;
  double diffusion = 0.0;
  double total = 0.0;
  double learning_rate = 0.0;

  /// Named components (without the total).
  std::vector<std::pair<std::string, double>> components() const;
};

struct TrainingOptions {
  long steps = 1000;
  int batch_size = 4;
  nn::AdamOptions adam;
  MaskSpec mask;
  std::uint64_t seed = 0;
  std::set<std::string> frozen;
  long finetune_cap = 5000;
  long log_every = 50;
  long checkpoint_every = 0;  // 0: only the final checkpoint
  std::optional<std::filesystem::path> run_dir;
  std::function<void(const std::string&)> log;  // defaults to stderr
};

struct BatchLoss {
  nn::Tensor total;
  LossReport report;
};

/// Summed MPP and diffusion losses averaged over the batch. All sampling
/// (masks, reference choice, diffusion step and noise) derives from `seed`.
BatchLoss compute_batch_loss(const model::TtsModel& model, const Dataset& data,
                             std::span<const std::size_t> batch, const MaskSpec& mask,
                             std::uint64_t seed,
                             const std::function<void(const std::string&)>& warn = {});

/// Index of the timbre reference for utterance `index`: another utterance of
/// the same speaker, or the utterance itself for parallel_spk and for
/// single-utterance speakers.
std::size_t choose_reference(const Dataset& data, std::size_t index, model::Variant variant,
                             Rng& rng, bool* fell_back = nullptr);

class Trainer {
 public:
  Trainer(model::TtsModel& model, const Dataset& data, TrainingOptions options);

  LossReport train_step();
  LossReport train_step(std::span<const std::size_t> batch);
  /// Runs `steps` optimisation steps, logging metrics and writing
  /// checkpoints into the run directory when one is configured.
  std::vector<LossReport> run(long steps);

  long step() const { return optimizer_.steps_taken(); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void save(const std::filesystem::path& path) const;

 private:
  void warn(const std::string& message);

  model::TtsModel& model_;
  const Dataset& data_;
  TrainingOptions options_;
  nn::Adam optimizer_;
  Rng batch_rng_;
  std::set<std::string> warned_;
  std::vector<std::string> warnings_;
};

inline const std::set<std::string> kFinetuneFrozen = {model::kLinguisticEncoder,
                                                      model::kStyleEncoder};

/// Continues training with the linguistic and style encoders frozen, for
/// min(steps_budget, options.finetune_cap) steps.
std::vector<LossReport> finetune(model::TtsModel& model, const Dataset& data,
                                 TrainingOptions options, long steps_budget);

}  // namespace ptts::training
