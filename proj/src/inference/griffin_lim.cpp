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


#include "inference/griffin_lim.hpp"

#include "features/mel.hpp"
#include "features/stft.hpp"
#include "util/random.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace ptts::inference {

using features::ComplexMatrix;
using features::FeatureMatrix;

namespace {

const FeatureMatrix& inverse_filterbank() {
  static const FeatureMatrix inv = [] {
    const FeatureMatrix& fb = features::mel_filterbank();
    return FeatureMatrix(fb.completeOrthogonalDecomposition().pseudoInverse());
  }();
  return inv;
}

}  // namespace

features::Waveform griffin_lim(const features::MelSpectrogram& mel, int iterations,
                               std::uint64_t seed) {
  if (iterations < 1) throw features::FeatureError("griffin_lim: iterations must be >= 1");
  if (mel.values.cols() != features::kMelBands) {
    throw features::FeatureError("griffin_lim: expected " + std::to_string(features::kMelBands) +
                                 " mel bands");
  }
  if (mel.frames() < 1) throw features::FeatureError("griffin_lim: empty mel");
  if (!mel.values.allFinite()) throw features::FeatureError("griffin_lim: non-finite mel values");

  const FeatureMatrix magnitude =
      (mel.values.array().exp().matrix() * inverse_filterbank().transpose()).cwiseMax(0.0);
  const std::size_t length = static_cast<std::size_t>(mel.frames() - 1) * features::kHopSize;

  Rng rng(derive_seed(seed, "griffin_lim.phase"));
  ComplexMatrix phase(magnitude.rows(), magnitude.cols());
  for (Eigen::Index i = 0; i < phase.size(); ++i) {
    phase.data()[i] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  }

  std::vector<double> samples;
  for (int it = 0; it < iterations; ++it) {
    const ComplexMatrix spec = magnitude.cast<std::complex<double>>().cwiseProduct(phase);
    samples = features::istft(spec, length);
    const ComplexMatrix rebuilt = features::stft(samples);
    for (Eigen::Index i = 0; i < phase.size(); ++i) {
      const std::complex<double> z = rebuilt.data()[i];
      const double a = std::abs(z);
      phase.data()[i] = a > 0.0 ? z / a : std::complex<double>(1.0, 0.0);
    }
  }
  samples = features::istft(magnitude.cast<std::complex<double>>().cwiseProduct(phase), length);

  features::Waveform out;
  out.samples = std::move(samples);
  out.sample_rate = features::kSampleRate;
  return out;
}

}  // namespace ptts::inference
