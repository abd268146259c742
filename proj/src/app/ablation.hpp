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
#include "evaluation/metrics.hpp"
#include "model/tts_model.hpp"
#include "training/dataset.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ptts::app {

struct TransferEvaluation {
  evaluation::ProsodyDistance prosody;
  double asv = 0.0;  // mean cosine, generated vs reference target region
  std::size_t asv_pairs = 0;
  std::size_t utterances = 0;
  std::vector<std::string> warnings;
};

/// Prompted continuation on held-out utterances: the first phonemes of each
/// utterance (covering at most (1 - mask_ratio) of its frames) form the
/// prosody prompt, the remaining phonemes are synthesised, and the predicted
/// tracks are compared with the measured ones of that remaining region.
TransferEvaluation evaluate_prompt_transfer(const model::TtsModel& model,
                                            const training::Dataset& data, double mask_ratio,
                                            std::uint64_t seed);

struct AblationRow {
  model::Variant variant = model::Variant::Baseline;
  double asv = 0.0;
  evaluation::StatDifference pitch;
  double final_loss = 0.0;
};

struct AblationReport {
  std::vector<AblationRow> rows;
  std::size_t train_utterances = 0;
  std::size_t eval_utterances = 0;
  long steps = 0;
  std::vector<std::string> warnings;
};

/// "a,b,c" to variants; at least two, each known.
std::vector<model::Variant> parse_variant_list(std::string_view list);

/// Trains each variant from the same seed and data, then evaluates it.
AblationReport run_ablation(const RunConfig& base, const std::vector<model::Variant>& variants,
                            const training::Dataset& train, const training::Dataset& eval,
                            const std::function<void(const std::string&)>& log = {});

/// Plain-text table: one row per variant, five numeric columns.
std::string format_ablation_table(const AblationReport& report);
std::string ablation_json(const AblationReport& report);

}  // namespace ptts::app
