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

#include <cstdint>

namespace ptts::inference {

inline constexpr int kDefaultGriffinLimIterations = 60;

/// Log-mel (natural log of magnitude mel) to waveform: pseudo-inverse of
/// the filterbank, then iterative phase reconstruction. The initial phase is
/// drawn from `seed`.
features::Waveform griffin_lim(const features::MelSpectrogram& mel,
                               int iterations = kDefaultGriffinLimIterations,
                               std::uint64_t seed = 0);

}  // namespace ptts::inference
