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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptts::model {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Variant { Baseline, CnnPredictor, AttenPredictor, ParallelSpk, AddallSpk, Ns2Prompting };

inline constexpr Variant kAllVariants[] = {Variant::Baseline,       Variant::CnnPredictor,
                                           Variant::AttenPredictor, Variant::ParallelSpk,
                                           Variant::AddallSpk,      Variant::Ns2Prompting};

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

struct PredictorLayers {
  int duration = 2;
  int pitch = 4;
  int energy = 2;

  bool operator==(const PredictorLayers&) const = default;
};

struct ModelConfig {
  int hidden_dim = 256;
  int n_mels = 80;
  int spk_embed_dim = 256;
  int basis_dim = 128;
  int basis_count = 2000;
  PredictorLayers predictor_layers;
  int decoder_layers = 20;
  int decoder_kernel = 3;
  int decoder_dilation = 1;
  int diffusion_steps = 100;
  Variant variant = Variant::Baseline;

  int vocab_size = 64;
  int encoder_layers = 4;
  int style_layers = 2;
  int timbre_layers = 2;
  int attention_heads = 2;
  int ffn_dim = 1024;
  int ffn_kernel = 9;
  int conformer_heads = 2;
  int conformer_kernel = 9;
  int cnn_kernel = 3;
  int decoder_channels = 256;
  double beta_start = 1e-4;
  double beta_end = 0.06;
  double mel_min = -11.512925464970229;  // ln(1e-5)
  double mel_max = 2.5;
  double pitch_log_mean = 5.0;
  double pitch_log_std = 0.5;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

struct FieldInfo {
  std::string key;  // without the "model." prefix
  std::string description;
};

/// Every field key with a one-line description.
std::vector<FieldInfo> model_config_fields();

/// Sets a field from its textual form; throws ConfigError on unknown keys
/// or malformed values.
void set_model_field(ModelConfig& config, std::string_view key, std::string_view value);
std::string get_model_field(const ModelConfig& config, std::string_view key);

/// "key=value" lines, one per field, in declaration order.
std::string format_model_config(const ModelConfig& config, std::string_view prefix = "");
ModelConfig parse_model_config(std::string_view text, std::string_view prefix = "");

/// Number formatting shared by every config writer: integers verbatim,
/// doubles with 17 significant digits so reading back is exact.
std::string format_number(double v);

}  // namespace ptts::model
