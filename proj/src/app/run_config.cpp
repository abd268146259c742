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


#include "app/run_config.hpp"

#include "features/types.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

namespace ptts::app {

namespace {

using Ref = std::variant<long*, int*, double*, std::string*, std::optional<std::uint64_t>*,
                         training::MaskMode*, std::vector<std::string>*>;

struct Field {
  const char* key;
  const char* description;
  Ref ref;
};

std::vector<Field> fields_of(RunConfig& c) {
  auto& d = c.data;
  auto& t = c.training;
  auto& f = c.features;
  return {
      {"data.manifest", "training manifest (JSON Lines)", &d.manifest},
      {"data.eval_manifest", "held-out manifest; empty uses the test split", &d.eval_manifest},
      {"data.run_dir", "run directory for config snapshot, metrics and checkpoints", &d.run_dir},
      {"data.init_checkpoint", "checkpoint that finetuning starts from", &d.init_checkpoint},
      {"training.steps", "optimisation steps for pretraining", &t.steps},
      {"training.batch_size", "utterances per step", &t.batch_size},
      {"training.learning_rate", "peak learning rate", &t.learning_rate},
      {"training.warmup_steps", "linear warmup length before inverse-sqrt decay", &t.warmup_steps},
      {"training.beta1", "Adam first-moment decay", &t.beta1},
      {"training.beta2", "Adam second-moment decay", &t.beta2},
      {"training.grad_clip", "global gradient-norm clip (<= 0 disables)", &t.grad_clip},
      {"training.seed", "root seed (required)", &t.seed},
      {"training.mask_ratio", "fraction of each prosody track hidden during training",
       &t.mask_ratio},
      {"training.mask_mode", "posterior|random_contiguous", &t.mask_mode},
      {"training.finetune_steps", "hard cap on finetuning steps", &t.finetune_steps},
      {"training.frozen_modules", "comma-separated module names never updated",
       &t.frozen_modules},
      {"training.log_every", "steps between progress lines", &t.log_every},
      {"training.checkpoint_every", "steps between checkpoints (0: final only)",
       &t.checkpoint_every},
      {"features.cache_dir", "feature cache directory (PTTS_CACHE_DIR overrides)", &f.cache_dir},
      {"features.sample_rate", "analysis sample rate (fixed at 16000)", &f.sample_rate},
      {"features.fft_size", "STFT size (fixed at 1024)", &f.fft_size},
      {"features.hop_size", "STFT hop (fixed at 256)", &f.hop_size},
      {"features.n_mels", "mel bands (fixed at 80)", &f.n_mels},
      {"features.pitch_min_hz", "lowest detectable pitch (fixed at 50)", &f.pitch_min_hz},
      {"features.pitch_max_hz", "highest detectable pitch (fixed at 600)", &f.pitch_max_hz},
  };
}

template <typename T>
T parse_integer(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw UsageError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out)) {
    throw UsageError(std::string(key) + ": expected a number, got '" + s + "'");
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

const Field* find_field(const std::vector<Field>& fields, std::string_view key) {
  for (const Field& f : fields) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  if (!training.seed) throw UsageError("training.seed is required (no unseeded runs)");
  if (training.steps < 0) throw UsageError("training.steps must be >= 0");
  if (training.batch_size <= 0) throw UsageError("training.batch_size must be positive");
  if (!(training.learning_rate > 0.0)) throw UsageError("training.learning_rate must be positive");
  if (training.warmup_steps < 0) throw UsageError("training.warmup_steps must be >= 0");
  if (!(training.mask_ratio >= 0.0 && training.mask_ratio <= 1.0)) {
    throw UsageError("training.mask_ratio must lie in [0, 1]");
  }
  if (training.finetune_steps <= 0) throw UsageError("training.finetune_steps must be positive");
  if (features.sample_rate != features::kSampleRate || features.fft_size != features::kFftSize ||
      features.hop_size != features::kHopSize || features.n_mels != features::kMelBands ||
      features.pitch_min_hz != features::kPitchMinHz ||
      features.pitch_max_hz != features::kPitchMaxHz) {
    throw UsageError("features.* analysis parameters are fixed at 16000/1024/256/80/50/600");
  }
  if (model.n_mels != features.n_mels) {
    throw UsageError("model.n_mels must equal features.n_mels");
  }
}

training::TrainingOptions RunConfig::training_options() const {
  training::TrainingOptions o;
  o.steps = training.steps;
  o.batch_size = training.batch_size;
  o.adam.learning_rate = training.learning_rate;
  o.adam.warmup_steps = training.warmup_steps;
  o.adam.beta1 = training.beta1;
  o.adam.beta2 = training.beta2;
  o.adam.grad_clip = training.grad_clip;
  o.mask.ratio = training.mask_ratio;
  o.mask.mode = training.mask_mode;
  o.seed = training.seed.value_or(0);
  o.frozen.insert(training.frozen_modules.begin(), training.frozen_modules.end());
  o.finetune_cap = training.finetune_steps;
  o.log_every = training.log_every;
  o.checkpoint_every = training.checkpoint_every;
  return o;
}

std::vector<KeyInfo> run_config_keys() {
  std::vector<KeyInfo> out;
  for (const auto& f : model::model_config_fields()) {
    out.push_back({"model." + f.key, f.description});
  }
  RunConfig c;
  for (const Field& f : fields_of(c)) out.push_back({f.key, f.description});
  return out;
}

void set_key(RunConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key.substr(0, 6) == "model.") {
    try {
      model::set_model_field(config.model, key.substr(6), value);
    } catch (const model::ConfigError& e) {
      throw UsageError(e.what());
    }
    return;
  }
  const auto fields = fields_of(config);
  const Field* f = find_field(fields, key);
  if (!f) throw UsageError("unknown config key '" + std::string(key) + "'");
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, long>) {
          *p = parse_integer<long>(key, value);
        } else if constexpr (std::is_same_v<T, int>) {
          *p = parse_integer<int>(key, value);
        } else if constexpr (std::is_same_v<T, double>) {
          *p = parse_real(key, value);
        } else if constexpr (std::is_same_v<T, std::string>) {
          *p = std::string(value);
        } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
          *p = parse_integer<std::uint64_t>(key, value);
        } else if constexpr (std::is_same_v<T, training::MaskMode>) {
          if (value == "posterior") {
            *p = training::MaskMode::Posterior;
          } else if (value == "random_contiguous") {
            *p = training::MaskMode::RandomContiguous;
          } else {
            throw UsageError(std::string(key) + ": expected posterior or random_contiguous");
          }
        } else {
          *p = split_list(value);
        }
      },
      f->ref);
}

std::string get_key(const RunConfig& config, std::string_view key) {
  if (key.substr(0, 6) == "model.") {
    try {
      return model::get_model_field(config.model, key.substr(6));
    } catch (const model::ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  RunConfig copy = config;
  const auto fields = fields_of(copy);
  const Field* f = find_field(fields, key);
  if (!f) throw UsageError("unknown config key '" + std::string(key) + "'");
  return std::visit(
      [](auto* p) -> std::string {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, long> || std::is_same_v<T, int>) {
          return std::to_string(*p);
        } else if constexpr (std::is_same_v<T, double>) {
          return model::format_number(*p);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return *p;
        } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
          return *p ? std::to_string(**p) : std::string();
        } else if constexpr (std::is_same_v<T, training::MaskMode>) {
          return *p == training::MaskMode::Posterior ? "posterior" : "random_contiguous";
        } else {
          std::string out;
          for (std::size_t i = 0; i < p->size(); ++i) out += (i ? "," : "") + (*p)[i];
          return out;
        }
      },
      f->ref);
}

std::string dump_run_config(const RunConfig& config) {
  std::string out;
  for (const KeyInfo& k : run_config_keys()) {
    if (k.key == "training.seed" && !config.training.seed) continue;
    out += k.key + "=" + get_key(config, k.key) + "\n";
  }
  return out;
}

RunConfig parse_run_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(std::string(origin) + ":" + std::to_string(number) +
                       ": expected key=value");
    }
    try {
      set_key(config, trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError(std::string(origin) + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.string());
}

std::uint64_t config_checksum(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump_run_config(config)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string effective_cache_dir(const RunConfig& config) {
  if (const char* env = std::getenv("PTTS_CACHE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return config.features.cache_dir;
}

}  // namespace ptts::app
