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


#include "inference/prompt.hpp"

namespace ptts::inference {

model::PromptTrack build_prompt(const std::vector<double>& ref, std::size_t target_len) {
  model::PromptTrack p;
  p.values = ref;
  p.values.resize(ref.size() + target_len, 0.0);
  p.mask.assign(ref.size(), false);
  p.mask.resize(ref.size() + target_len, true);
  return p;
}

}  // namespace ptts::inference
