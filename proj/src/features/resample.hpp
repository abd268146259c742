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

#include "features/types.hpp"

namespace ptts::features {

/// Band-limited (Hann-windowed sinc) resampling. Equal rates return the input
/// unchanged. Output length is round(N * target / source).
Waveform resample(const Waveform& wav, int target_rate);

}  // namespace ptts::features
