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

#include "model/model_config.hpp"
#include "training/trainer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptts::app {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DataConfig {
  std::string manifest;       // training manifest (JSON Lines)
  std::string eval_manifest;  // optional held-out manifest; empty: Test split of `manifest`
  std::string run_dir = "runs/default";
  std::string init_checkpoint;  // finetune start point
};

struct TrainingConfig {
  long steps = 1000;
  int batch_size = 4;
  double learning_rate = 1e-3;
  int warmup_steps = 100;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double grad_clip = 1.0;
  std::optional<std::uint64_t> seed;  // required: runs are never unseeded
  double mask_ratio = 0.6;
  training::MaskMode mask_mode = training::MaskMode::Posterior;
  long finetune_steps = 5000;  // hard cap on finetune steps
  std::vector<std::string> frozen_modules;
  long log_every = 50;
  long checkpoint_every = 0;
};

struct FeatureConfig {
  std::string cache_dir;  // empty: no cache
  int sample_rate = 16000;
  int fft_size = 1024;
  int hop_size = 256;
  int n_mels = 80;
  double pitch_min_hz = 50.0;
  double pitch_max_hz = 600.0;
};

struct RunConfig {
  model::ModelConfig model;
  DataConfig data;
  TrainingConfig training;
  FeatureConfig features;

  /// Field invariants plus the seed requirement.
  void validate() const;
  training::TrainingOptions training_options() const;
};

struct KeyInfo {
  std::string key;
  std::string description;
};
/// Every accepted key (fully qualified) with a description.
std::vector<KeyInfo> run_config_keys();

void set_key(RunConfig& config, std::string_view key, std::string_view value);
std::string get_key(const RunConfig& config, std::string_view key);

/// Effective configuration as "key=value" lines; unset seed is omitted.
std::string dump_run_config(const RunConfig& config);
/// Parses "key=value" lines ('#' comments, blank lines ignored). Does not
/// validate, so flags can still fill required keys.
RunConfig parse_run_config(std::string_view text, std::string_view origin = "<memory>");
RunConfig load_run_config(const std::filesystem::path& path);

/// FNV-1a of dump_run_config.
std::uint64_t config_checksum(const RunConfig& config);

/// Cache directory after applying the PTTS_CACHE_DIR override.
std::string effective_cache_dir(const RunConfig& config);

}  // namespace ptts::app
