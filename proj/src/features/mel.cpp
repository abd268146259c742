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

#include "features/resample.hpp"
#include "features/stft.hpp"

#include <cmath>

namespace ptts::features {

namespace {

double hz_to_mel(double hz) {
  constexpr double f_sp = 200.0 / 3.0;
  constexpr double min_log_hz = 1000.0;
  const double min_log_mel = min_log_hz / f_sp;
  const double logstep = std::log(6.4) / 27.0;
  if (hz < min_log_hz) return hz / f_sp;
  return min_log_mel + std::log(hz / min_log_hz) / logstep;
}

double mel_to_hz(double mel) {
  constexpr double f_sp = 200.0 / 3.0;
  constexpr double min_log_hz = 1000.0;
  const double min_log_mel = min_log_hz / f_sp;
  const double logstep = std::log(6.4) / 27.0;
  if (mel < min_log_mel) return mel * f_sp;
  return min_log_hz * std::exp(logstep * (mel - min_log_mel));
}

FeatureMatrix build_filterbank() {
  const int bins = kFftSize / 2 + 1;
  FeatureMatrix fb = FeatureMatrix::Zero(kMelBands, bins);
  const double mel_lo = hz_to_mel(kMelFmin);
  const double mel_hi = hz_to_mel(kMelFmax);
  std::vector<double> hz(kMelBands + 2);
  for (int i = 0; i < kMelBands + 2; ++i) {
    hz[static_cast<std::size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (kMelBands + 1));
  }
  for (int m = 0; m < kMelBands; ++m) {
    const double lo = hz[static_cast<std::size_t>(m)];
    const double mid = hz[static_cast<std::size_t>(m) + 1];
    const double hi = hz[static_cast<std::size_t>(m) + 2];
    const double enorm = 2.0 / (hi - lo);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * kSampleRate / kFftSize;
      const double up = (f - lo) / (mid - lo);
      const double down = (hi - f) / (hi - mid);
      fb(m, k) = std::max(0.0, std::min(up, down)) * enorm;
    }
  }
  return fb;
}

void require_16k(const Waveform& wav) {
  if (wav.sample_rate != kSampleRate) {
    throw FeatureError("expected 16000 Hz audio, got " + std::to_string(wav.sample_rate) +
                       " Hz; resample first");
  }
}

FeatureMatrix magnitudes(const Waveform& wav) {
  const ComplexMatrix spec = stft(wav.samples);
  return spec.cwiseAbs();
}

MelSpectrogram mel_from_magnitude(const FeatureMatrix& mag) {
  MelSpectrogram mel;
  mel.values = (mag * mel_filterbank().transpose()).array().max(kMagnitudeFloor).log();
  return mel;
}

std::vector<double> energy_from_magnitude(const FeatureMatrix& mag) {
  std::vector<double> e(static_cast<std::size_t>(mag.rows()));
  for (Eigen::Index t = 0; t < mag.rows(); ++t) e[static_cast<std::size_t>(t)] = mag.row(t).norm();
  return e;
}

}  // namespace

const FeatureMatrix& mel_filterbank() {
  static const FeatureMatrix fb = build_filterbank();
  return fb;
}

MelSpectrogram mel_spectrogram(const Waveform& wav) {
  require_16k(wav);
  return mel_from_magnitude(magnitudes(wav));
}

std::vector<double> extract_energy(const Waveform& wav) {
  require_16k(wav);
  return energy_from_magnitude(magnitudes(wav));
}

UtteranceFeatures extract_features(const Waveform& wav) {
  require_16k(wav);
  const FeatureMatrix mag = magnitudes(wav);
  UtteranceFeatures f;
  f.mel = mel_from_magnitude(mag);
  f.energy = energy_from_magnitude(mag);
  PitchTrack p = extract_pitch(wav);
  f.pitch_hz = std::move(p.pitch_hz);
  f.voiced = std::move(p.voiced);
  return f;
}

UtteranceFeatures extract_features_any_rate(const Waveform& wav) {
  if (wav.sample_rate == kSampleRate) return extract_features(wav);
  return extract_features(resample(wav, kSampleRate));
}

}  // namespace ptts::features
