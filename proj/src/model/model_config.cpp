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


#include "model/model_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <variant>

namespace ptts::model {

namespace {

using FieldRef = std::variant<int*, double*, Variant*>;

struct Field {
  const char* key;
  const char* description;
  FieldRef ref;
};

std::vector<Field> fields_of(ModelConfig& c) {
  return {
      {"hidden_dim", "width of encoder, predictor and conditioning sequences", &c.hidden_dim},
      {"n_mels", "mel bands produced by the decoder", &c.n_mels},
      {"spk_embed_dim", "width of the speaker representation", &c.spk_embed_dim},
      {"basis_dim", "width of each speaker basis vector", &c.basis_dim},
      {"basis_count", "number of speaker basis vectors", &c.basis_count},
      {"predictor_layers.duration", "duration predictor depth", &c.predictor_layers.duration},
      {"predictor_layers.pitch", "pitch predictor depth", &c.predictor_layers.pitch},
      {"predictor_layers.energy", "energy predictor depth", &c.predictor_layers.energy},
      {"decoder_layers", "residual layers in the denoiser", &c.decoder_layers},
      {"decoder_kernel", "denoiser convolution kernel (odd)", &c.decoder_kernel},
      {"decoder_dilation", "denoiser convolution dilation", &c.decoder_dilation},
      {"diffusion_steps", "number of diffusion steps", &c.diffusion_steps},
      {"variant", "baseline|cnn_predictor|atten_predictor|parallel_spk|addall_spk|ns2_prompting",
       &c.variant},
      {"vocab_size", "phoneme embedding rows", &c.vocab_size},
      {"encoder_layers", "transformer blocks in the linguistic encoder", &c.encoder_layers},
      {"style_layers", "transformer blocks in the style adaptive encoder", &c.style_layers},
      {"timbre_layers", "transformer blocks over the reference mel", &c.timbre_layers},
      {"attention_heads", "heads in encoder attention", &c.attention_heads},
      {"ffn_dim", "inner width of encoder feed-forward convolutions", &c.ffn_dim},
      {"ffn_kernel", "kernel of the first encoder feed-forward convolution", &c.ffn_kernel},
      {"conformer_heads", "heads in predictor attention", &c.conformer_heads},
      {"conformer_kernel", "depthwise kernel in conformer predictors", &c.conformer_kernel},
      {"cnn_kernel", "kernel of convolution-only predictors", &c.cnn_kernel},
      {"decoder_channels", "residual channels in the denoiser", &c.decoder_channels},
      {"beta_start", "first value of the linear noise schedule", &c.beta_start},
      {"beta_end", "last value of the linear noise schedule", &c.beta_end},
      {"mel_min", "log-mel value mapped to -1", &c.mel_min},
      {"mel_max", "log-mel value mapped to +1", &c.mel_max},
      {"pitch_log_mean", "log-Hz centre of the pitch feature", &c.pitch_log_mean},
      {"pitch_log_std", "log-Hz scale of the pitch feature", &c.pitch_log_std},
  };
}

const Field& find_field(const std::vector<Field>& fields, std::string_view key) {
  for (const Field& f : fields) {
    if (key == f.key) return f;
  }
  throw ConfigError("unknown model config key '" + std::string(key) + "'");
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("model." + std::string(key) + ": expected an integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  std::string s(value);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out)) {
    throw ConfigError("model." + std::string(key) + ": expected a number, got '" + s + "'");
  }
  return out;
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::Baseline: return "baseline";
    case Variant::CnnPredictor: return "cnn_predictor";
    case Variant::AttenPredictor: return "atten_predictor";
    case Variant::ParallelSpk: return "parallel_spk";
    case Variant::AddallSpk: return "addall_spk";
    case Variant::Ns2Prompting: return "ns2_prompting";
  }
  return "baseline";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

std::string format_number(double v) {
  if (std::floor(v) == v && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ModelConfig::validate() const {
  ModelConfig copy = *this;
  for (const Field& f : fields_of(copy)) {
    if (const auto* p = std::get_if<int*>(&f.ref)) {
      if (**p <= 0) throw ConfigError(std::string("model.") + f.key + " must be positive");
    }
  }
  if (decoder_kernel % 2 == 0) throw ConfigError("model.decoder_kernel must be odd");
  if (ffn_kernel % 2 == 0) throw ConfigError("model.ffn_kernel must be odd");
  if (conformer_kernel % 2 == 0) throw ConfigError("model.conformer_kernel must be odd");
  if (cnn_kernel % 2 == 0) throw ConfigError("model.cnn_kernel must be odd");
  if (hidden_dim % attention_heads != 0 || hidden_dim % conformer_heads != 0) {
    throw ConfigError("model.hidden_dim must be divisible by the attention head counts");
  }
  if (!(beta_start > 0.0 && beta_start < beta_end && beta_end < 1.0)) {
    throw ConfigError("model.beta_start/beta_end must satisfy 0 < start < end < 1");
  }
  if (!(mel_min < mel_max)) throw ConfigError("model.mel_min must be below model.mel_max");
  if (!(pitch_log_std > 0.0)) throw ConfigError("model.pitch_log_std must be positive");
}

std::vector<FieldInfo> model_config_fields() {
  ModelConfig c;
  std::vector<FieldInfo> out;
  for (const Field& f : fields_of(c)) out.push_back({f.key, f.description});
  return out;
}

void set_model_field(ModelConfig& config, std::string_view key, std::string_view value) {
  const auto fields = fields_of(config);
  const Field& f = find_field(fields, key);
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, int>) {
          *p = parse_int(key, value);
        } else if constexpr (std::is_same_v<T, double>) {
          *p = parse_double(key, value);
        } else {
          *p = parse_variant(value);
        }
      },
      f.ref);
}

std::string get_model_field(const ModelConfig& config, std::string_view key) {
  ModelConfig copy = config;
  const auto fields = fields_of(copy);
  const Field& f = find_field(fields, key);
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, int>) {
          return std::to_string(*p);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(*p);
        } else {
          return std::string(variant_name(*p));
        }
      },
      f.ref);
}

std::string format_model_config(const ModelConfig& config, std::string_view prefix) {
  std::string out;
  for (const FieldInfo& f : model_config_fields()) {
    out += std::string(prefix) + f.key + "=" + get_model_field(config, f.key) + "\n";
  }
  return out;
}

ModelConfig parse_model_config(std::string_view text, std::string_view prefix) {
  ModelConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed config line '" + line + "'");
    std::string_view key(line.data(), eq);
    if (!prefix.empty()) {
      if (key.substr(0, prefix.size()) != prefix) continue;
      key.remove_prefix(prefix.size());
    }
    set_model_field(config, key, std::string_view(line).substr(eq + 1));
  }
  config.validate();
  return config;
}

}  // namespace ptts::model
