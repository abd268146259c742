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

#include <filesystem>
#include <string>
#include <vector>

namespace ptts::features {

struct TimeSpan {
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
};

/// Converts per-phoneme spans to frame counts: each span is rounded to whole
/// frames and whatever the rounding left over (or overshot) is absorbed at
/// the end so the counts sum to `total_frames`.
std::vector<int> durations_from_alignment(std::size_t phoneme_count,
                                          const std::vector<TimeSpan>& alignment,
                                          int total_frames, double hop_s = kHopSeconds);

/// Alignment file: one token per line, "token<ws>start<ws>end".
std::vector<TimeSpan> read_alignment(const std::filesystem::path& path);
void write_alignment(const std::filesystem::path& path, const std::vector<TimeSpan>& spans);

}  // namespace ptts::features
