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

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace ptts::model {

inline constexpr std::uint8_t kCheckpointVersion = 1;

struct Checkpoint {
  std::unique_ptr<TtsModel> model;
  std::vector<std::string> phoneme_symbols;  // index = phoneme id
  long step = 0;
};

void save_checkpoint(const std::filesystem::path& path, const TtsModel& model,
                     const std::vector<std::string>& phoneme_symbols, long step);

/// Rebuilds the model from the stored config and fills every weight.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Loads weights into an existing model; throws when the stored config or
/// any parameter shape differs from the model's.
void load_weights(const std::filesystem::path& path, TtsModel& model);

}  // namespace ptts::model
