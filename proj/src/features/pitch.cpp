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

#include "features/mel.hpp"
#include "features/stft.hpp"

#include <cmath>

namespace ptts::features {

namespace {

// The smallest lag whose correlation reaches this fraction of the best one
// wins, which suppresses sub-harmonic (octave-down) picks.
constexpr double kFirstPeakFraction = 0.9;
constexpr double kSilenceEnergy = 1e-10;

}  // namespace

PitchTrack extract_pitch(const Waveform& wav) {
  if (wav.sample_rate != kSampleRate) {
    throw FeatureError("extract_pitch: expected 16000 Hz audio; resample first");
  }
  const FeatureMatrix frames = frame_signal(wav.samples);
  const int n = kWindowSize;
  const int lag_min = static_cast<int>(std::floor(kSampleRate / kPitchMaxHz));
  const int lag_max = static_cast<int>(std::ceil(kSampleRate / kPitchMinHz));
  const int fft_size = 2 * kFftSize;
  RealFft fft(fft_size);

  PitchTrack track;
  track.pitch_hz.assign(static_cast<std::size_t>(frames.rows()), 0.0);
  track.voiced.assign(static_cast<std::size_t>(frames.rows()), false);

  std::vector<double> x(static_cast<std::size_t>(fft_size), 0.0);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(fft_size / 2 + 1));
  std::vector<double> acf(static_cast<std::size_t>(fft_size));
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1);
  std::vector<double> nccf(static_cast<std::size_t>(lag_max) + 2, 0.0);

  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    const double mean = frames.row(t).mean();
    std::fill(x.begin(), x.end(), 0.0);
    prefix[0] = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = frames(t, i) - mean;
      x[static_cast<std::size_t>(i)] = v;
      prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + v * v;
    }
    const double total = prefix[static_cast<std::size_t>(n)];
    if (total / n < kSilenceEnergy) continue;

    fft.forward(x, spec);
    for (auto& c : spec) c = std::norm(c);
    fft.inverse(spec, acf);

    double best = -1.0;
    for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      const double e1 = prefix[static_cast<std::size_t>(n - lag)];
      const double e2 = total - prefix[static_cast<std::size_t>(lag)];
      const double denom = std::sqrt(e1 * e2);
      const double r = acf[static_cast<std::size_t>(lag)] / fft_size;
      nccf[static_cast<std::size_t>(lag)] = denom > 0 ? r / denom : 0.0;
      if (lag >= lag_min && lag <= lag_max) best = std::max(best, nccf[static_cast<std::size_t>(lag)]);
    }
    if (best < kPeriodicityThreshold) continue;

    int chosen = -1;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      const double c = nccf[static_cast<std::size_t>(lag)];
      if (c >= kFirstPeakFraction * best && c >= nccf[static_cast<std::size_t>(lag) - 1] &&
          c >= nccf[static_cast<std::size_t>(lag) + 1]) {
        chosen = lag;
        break;
      }
    }
    if (chosen < 0) continue;

    const double ym = nccf[static_cast<std::size_t>(chosen) - 1];
    const double y0 = nccf[static_cast<std::size_t>(chosen)];
    const double yp = nccf[static_cast<std::size_t>(chosen) + 1];
    const double curvature = ym - 2.0 * y0 + yp;
    double offset = 0.0;
    if (curvature < 0.0) offset = std::clamp(0.5 * (ym - yp) / curvature, -0.5, 0.5);
    const double f0 = kSampleRate / (chosen + offset);
    if (f0 < kPitchMinHz || f0 > kPitchMaxHz) continue;
    track.pitch_hz[static_cast<std::size_t>(t)] = f0;
    track.voiced[static_cast<std::size_t>(t)] = true;
  }
  return track;
}

}  // namespace ptts::features
