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

#include "features/stft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace ptts::features {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> center_pad(std::span<const double> x) {
  const std::size_t pad = kFftSize / 2;
  std::vector<double> out(x.size() + 2 * pad, 0.0);
  std::copy(x.begin(), x.end(), out.begin() + static_cast<long>(pad));
  if (x.size() > pad) {
    for (std::size_t i = 0; i < pad; ++i) {
      out[pad - 1 - i] = x[i + 1];
      out[pad + x.size() + i] = x[x.size() - 2 - i];
    }
  }
  return out;
}

}  // namespace

RealFft::RealFft(int size) : size_(size) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_ = fftw_alloc_real(static_cast<std::size_t>(size));
  auto* c = fftw_alloc_complex(static_cast<std::size_t>(size / 2 + 1));
  complex_ = c;
  forward_plan_ = fftw_plan_dft_r2c_1d(size, real_, c, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(size, c, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(complex_);
}

void RealFft::forward(std::span<const double> input, std::span<std::complex<double>> output) {
  std::memcpy(real_, input.data(), sizeof(double) * static_cast<std::size_t>(size_));
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  auto* c = static_cast<fftw_complex*>(complex_);
  for (int k = 0; k <= size_ / 2; ++k) output[static_cast<std::size_t>(k)] = {c[k][0], c[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> input, std::span<double> output) {
  auto* c = static_cast<fftw_complex*>(complex_);
  for (int k = 0; k <= size_ / 2; ++k) {
    c[k][0] = input[static_cast<std::size_t>(k)].real();
    c[k][1] = input[static_cast<std::size_t>(k)].imag();
  }
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::memcpy(output.data(), real_, sizeof(double) * static_cast<std::size_t>(size_));
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
  }
  return w;
}

Eigen::Index stft_frame_count(std::size_t samples) {
  return static_cast<Eigen::Index>(samples / kHopSize) + 1;
}

FeatureMatrix frame_signal(std::span<const double> samples) {
  const std::vector<double> padded = center_pad(samples);
  const Eigen::Index frames = stft_frame_count(samples.size());
  FeatureMatrix out(frames, kWindowSize);
  for (Eigen::Index t = 0; t < frames; ++t) {
    const std::size_t start = static_cast<std::size_t>(t) * kHopSize;
    for (int i = 0; i < kWindowSize; ++i) {
      const std::size_t idx = start + static_cast<std::size_t>(i);
      out(t, i) = idx < padded.size() ? padded[idx] : 0.0;
    }
  }
  return out;
}

ComplexMatrix stft(std::span<const double> samples) {
  const FeatureMatrix frames = frame_signal(samples);
  const std::vector<double> window = hann_window(kWindowSize);
  RealFft fft(kFftSize);
  const int bins = kFftSize / 2 + 1;
  ComplexMatrix spec(frames.rows(), bins);
  std::vector<double> buf(kFftSize);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(bins));
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    for (int i = 0; i < kFftSize; ++i) {
      buf[static_cast<std::size_t>(i)] = frames(t, i) * window[static_cast<std::size_t>(i)];
    }
    fft.forward(buf, out);
    for (int k = 0; k < bins; ++k) spec(t, k) = out[static_cast<std::size_t>(k)];
  }
  return spec;
}

std::vector<double> istft(const ComplexMatrix& spec, std::size_t length) {
  const Eigen::Index frames = spec.rows();
  const std::vector<double> window = hann_window(kWindowSize);
  const std::size_t total = static_cast<std::size_t>(kFftSize) +
                            static_cast<std::size_t>(kHopSize) * static_cast<std::size_t>(
                                                                     std::max<Eigen::Index>(
                                                                         frames - 1, 0));
  std::vector<double> acc(total, 0.0);
  std::vector<double> norm(total, 0.0);
  RealFft fft(kFftSize);
  std::vector<std::complex<double>> in(static_cast<std::size_t>(spec.cols()));
  std::vector<double> out(kFftSize);
  for (Eigen::Index t = 0; t < frames; ++t) {
    for (Eigen::Index k = 0; k < spec.cols(); ++k) in[static_cast<std::size_t>(k)] = spec(t, k);
    fft.inverse(in, out);
    const std::size_t start = static_cast<std::size_t>(t) * kHopSize;
    for (int i = 0; i < kFftSize; ++i) {
      const double w = window[static_cast<std::size_t>(i)];
      acc[start + static_cast<std::size_t>(i)] += out[static_cast<std::size_t>(i)] / kFftSize * w;
      norm[start + static_cast<std::size_t>(i)] += w * w;
    }
  }
  std::vector<double> y(length, 0.0);
  const std::size_t offset = kFftSize / 2;
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t j = i + offset;
    if (j < total && norm[j] > 1e-8) y[i] = acc[j] / norm[j];
  }
  return y;
}

}  // namespace ptts::features
