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

#include <vector>

namespace ptts::inference {

/// Reference values followed by `target_len` hidden zeros: the inference
/// counterpart of a posterior training mask whose boundary is ref.size().
model::PromptTrack build_prompt(const std::vector<double>& ref, std::size_t target_len);

}  // namespace ptts::inference
