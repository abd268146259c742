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

#include "features/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ptts::features {

namespace {

constexpr int kZeroCrossings = 16;

}  // namespace

Waveform resample(const Waveform& wav, int target_rate) {
  if (target_rate <= 0) throw FeatureError("resample: target rate must be positive");
  if (wav.sample_rate <= 0) throw FeatureError("resample: source rate must be positive");
  if (wav.samples.empty()) throw FeatureError("resample: empty input");
  if (wav.sample_rate == target_rate) return wav;

  const double from = wav.sample_rate;
  const double to = target_rate;
  const double cutoff = 0.99 * 0.5 * std::min(from, to);  // Hz
  const double half_width = kZeroCrossings / (2.0 * cutoff);  // seconds
  const auto n_in = static_cast<long>(wav.samples.size());
  const auto n_out = static_cast<long>(std::llround(static_cast<double>(n_in) * to / from));

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.assign(static_cast<std::size_t>(n_out), 0.0);
  for (long n = 0; n < n_out; ++n) {
    const double t = static_cast<double>(n) / to;
    const long first = std::max(0L, static_cast<long>(std::ceil((t - half_width) * from)));
    const long last = std::min(n_in - 1, static_cast<long>(std::floor((t + half_width) * from)));
    double acc = 0.0;
    for (long k = first; k <= last; ++k) {
      const double dt = t - static_cast<double>(k) / from;
      const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * dt / half_width));
      const double x = 2.0 * cutoff * dt;
      const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * x) /
                                                           (std::numbers::pi * x);
      acc += wav.samples[static_cast<std::size_t>(k)] * window * sinc * 2.0 * cutoff / from;
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

}  // namespace ptts::features
