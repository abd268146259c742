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

#include <complex>
#include <span>
#include <vector>

namespace ptts::features {

using ComplexMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Real FFT of a fixed size backed by FFTW. Each instance owns its buffers,
/// so distinct instances may run on different threads.
class RealFft {
 public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return size_; }
  /// input.size() == size; returns size/2 + 1 bins.
  void forward(std::span<const double> input, std::span<std::complex<double>> output);
  /// Unnormalised inverse (result scaled by size).
  void inverse(std::span<const std::complex<double>> input, std::span<double> output);

 private:
  int size_;
  double* real_ = nullptr;
  void* complex_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Periodic Hann window.
std::vector<double> hann_window(int length);

/// floor(N / hop) + 1 frames for center-padded analysis.
Eigen::Index stft_frame_count(std::size_t samples);

/// Center-padded (reflect when long enough, zeros otherwise) short-time
/// Fourier transform with the fixed analysis geometry: frames x 513.
ComplexMatrix stft(std::span<const double> samples);

/// Weighted overlap-add inverse of `stft`; returns `length` samples.
std::vector<double> istft(const ComplexMatrix& spec, std::size_t length);

/// Center-padded raw frames (no window), frames x kWindowSize; shares the
/// framing used by `stft`.
FeatureMatrix frame_signal(std::span<const double> samples);

}  // namespace ptts::features
