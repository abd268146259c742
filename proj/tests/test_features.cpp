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


#include "features/durations.hpp"
#include "features/feature_cache.hpp"
#include "features/mel.hpp"
#include "features/resample.hpp"
#include "features/stft.hpp"
#include "features/wav_io.hpp"
#include "toy_corpus.hpp"
#include "util/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

using namespace ptts;
using namespace ptts::features;

namespace {

Waveform sine(double hz, double seconds, int rate = kSampleRate, double amp = 0.5) {
  Waveform w;
  w.sample_rate = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  }
  return w;
}

double median_voiced(const PitchTrack& p) {
  std::vector<double> v;
  for (std::size_t i = 0; i < p.pitch_hz.size(); ++i) {
    if (p.voiced[i]) v.push_back(p.pitch_hz[i]);
  }
  REQUIRE_FALSE(v.empty());
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Frequency of the largest DFT magnitude over the whole signal (naive DFT
// restricted to a band, with parabolic refinement).
double dominant_frequency(const std::vector<double>& x, int rate, double lo, double hi) {
  const std::size_t n = x.size();
  const double df = static_cast<double>(rate) / static_cast<double>(n);
  auto mag = [&](double k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * static_cast<double>(i) / n);
    }
    return std::abs(acc);
  };
  int best = static_cast<int>(lo / df);
  double best_mag = -1.0;
  for (int k = static_cast<int>(lo / df); k <= static_cast<int>(hi / df); ++k) {
    const double m = mag(k);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  return best * df;
}

}  // namespace

TEST_CASE("wave files round-trip at 16-bit precision") {
  const auto dir = testing::scratch_dir("wav");
  Waveform w = sine(300.0, 0.1);
  write_wav(dir / "a.wav", w);
  const Waveform r = read_wav(dir / "a.wav");
  REQUIRE(r.samples.size() == w.samples.size());
  CHECK(r.sample_rate == kSampleRate);
  for (std::size_t i = 0; i < w.samples.size(); ++i) CHECK(std::abs(r.samples[i] - w.samples[i]) < 1e-4);
  std::ofstream(dir / "bad.wav") << "not a wave file";
  CHECK_THROWS_AS(read_wav(dir / "bad.wav"), FeatureError);
  CHECK_THROWS_AS(read_wav(dir / "missing.wav"), FeatureError);
}

TEST_CASE("resampling") {
  const Waveform w = sine(440.0, 0.25);
  SUBCASE("same rate is a bit-identical passthrough") {
    const Waveform r = resample(w, kSampleRate);
    CHECK(r.samples == w.samples);
  }
  SUBCASE("one second at 48 kHz becomes 16000 +- 1 samples") {
    const Waveform r = resample(sine(440.0, 1.0, 48000), kSampleRate);
    CHECK(r.sample_rate == kSampleRate);
    CHECK(std::abs(static_cast<long>(r.samples.size()) - 16000) <= 1);
  }
  SUBCASE("a 440 Hz tone keeps its dominant frequency") {
    const Waveform r = resample(sine(440.0, 0.25, 48000), kSampleRate);
    const double f = dominant_frequency(r.samples, kSampleRate, 100.0, 2000.0);
    CHECK(std::abs(f - 440.0) <= 4.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(resample(Waveform{}, kSampleRate), FeatureError);
    CHECK_THROWS_AS(resample(w, 0), FeatureError);
  }
}

TEST_CASE("mel spectrogram framing and values") {
  const Waveform w = sine(440.0, 1.0);
  const MelSpectrogram mel = mel_spectrogram(w);
  CHECK(mel.frames() == 63);
  CHECK(mel.n_mels() == kMelBands);
  CHECK(mel.hop_s == doctest::Approx(256.0 / 16000.0));

  SUBCASE("agrees with a direct windowed DFT of an interior frame") {
    const int t = 20;
    const auto window = hann_window(kWindowSize);
    Eigen::RowVectorXd mag(kFftSize / 2 + 1);
    for (int k = 0; k <= kFftSize / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (int i = 0; i < kFftSize; ++i) {
        const double x = w.samples[static_cast<std::size_t>(t * kHopSize - kFftSize / 2 + i)];
        acc += x * window[static_cast<std::size_t>(i)] *
               std::polar(1.0, -2.0 * std::numbers::pi * k * i / kFftSize);
      }
      mag(k) = std::abs(acc);
    }
    const Eigen::RowVectorXd expected =
        (mag * mel_filterbank().transpose()).array().max(kMagnitudeFloor).log();
    CHECK((mel.values.row(t) - expected).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("silence sits at the log floor") {
    Waveform s;
    s.samples.assign(8000, 0.0);
    const MelSpectrogram m = mel_spectrogram(s);
    CHECK((m.values.array() == std::log(kMagnitudeFloor)).all());
  }
  SUBCASE("doubling the amplitude adds ln 2 above the floor") {
    Waveform w2 = w;
    for (double& v : w2.samples) v *= 2.0;
    const MelSpectrogram m2 = mel_spectrogram(w2);
    const double floor = std::log(kMagnitudeFloor);
    int checked = 0;
    for (Eigen::Index i = 0; i < mel.values.size(); ++i) {
      if (mel.values.data()[i] > floor + 1.0) {
        CHECK(m2.values.data()[i] - mel.values.data()[i] == doctest::Approx(std::log(2.0)));
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
  SUBCASE("is deterministic") { CHECK(mel_spectrogram(w).values == mel.values); }
  SUBCASE("rejects other sample rates") {
    CHECK_THROWS_AS(mel_spectrogram(sine(440.0, 0.1, 22050)), FeatureError);
  }
}

TEST_CASE("pitch extraction on pure tones") {
  CHECK(median_voiced(extract_pitch(sine(220.0, 1.0))) == doctest::Approx(220.0).epsilon(0.02));
  CHECK(median_voiced(extract_pitch(sine(110.0, 1.0))) == doctest::Approx(110.0).epsilon(0.02));
  Waveform silence;
  silence.samples.assign(16000, 0.0);
  const PitchTrack p = extract_pitch(silence);
  CHECK(std::none_of(p.voiced.begin(), p.voiced.end(), [](bool v) { return v; }));
}

TEST_CASE("energy") {
  Waveform silence;
  silence.samples.assign(4000, 0.0);
  for (double e : extract_energy(silence)) CHECK(e == doctest::Approx(0.0));
  const Waveform w = sine(330.0, 0.5, kSampleRate, 0.2);
  Waveform w2 = w;
  for (double& v : w2.samples) v *= 2.0;
  const auto e1 = extract_energy(w), e2 = extract_energy(w2);
  REQUIRE(e1.size() == e2.size());
  for (std::size_t i = 0; i < e1.size(); ++i) CHECK(e2[i] == doctest::Approx(2.0 * e1[i]));
}

TEST_CASE("frame synchrony and pitch/voicing coupling hold for random signals") {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    Waveform w;
    w.samples.resize(300 + rng.below(12000));
    const double f0 = rng.uniform(60.0, 500.0);
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
      w.samples[i] = (trial % 3 == 0 ? 0.3 * rng.normal() : 0.0) +
                     0.4 * std::sin(2 * std::numbers::pi * f0 * static_cast<double>(i) / kSampleRate);
    }
    const UtteranceFeatures f = extract_features(w);
    const auto frames = static_cast<std::size_t>(f.mel.frames());
    CHECK(frames == w.samples.size() / kHopSize + 1);
    CHECK(f.pitch_hz.size() == frames);
    CHECK(f.voiced.size() == frames);
    CHECK(f.energy.size() == frames);
    for (std::size_t i = 0; i < frames; ++i) CHECK((f.pitch_hz[i] == 0.0) == !f.voiced[i]);
  }
}

TEST_CASE("durations from alignments") {
  SUBCASE("rounding residual goes to the last phoneme") {
    const std::vector<TimeSpan> spans{{"a", 0.0, 0.5}, {"b", 0.5, 1.0}};
    CHECK(durations_from_alignment(2, spans, 63) == std::vector<int>{31, 32});
  }
  SUBCASE("one phoneme takes everything") {
    CHECK(durations_from_alignment(1, {{"a", 0.0, 1.0}}, 63) == std::vector<int>{63});
  }
  SUBCASE("zero-length spans are allowed") {
    const std::vector<TimeSpan> spans{{"a", 0.0, 0.3}, {"b", 0.3, 0.3}, {"c", 0.3, 0.6}};
    const auto d = durations_from_alignment(3, spans, 38);
    CHECK(d[1] == 0);
  }
  SUBCASE("count mismatch is an error") {
    CHECK_THROWS_AS(durations_from_alignment(3, {{"a", 0, 1}}, 10), FeatureError);
  }
  SUBCASE("conservation holds for random alignments") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + rng.below(20);
      std::vector<TimeSpan> spans;
      double t = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double len = rng.uniform(0.0, 0.3);
        spans.push_back({"p", t, t + len});
        t += len;
      }
      const int total = static_cast<int>(t / kHopSeconds) + static_cast<int>(rng.below(5));
      const auto d = durations_from_alignment(n, spans, total);
      long sum = 0;
      for (int v : d) {
        CHECK(v >= 0);
        sum += v;
      }
      CHECK(sum == total);
    }
  }
  SUBCASE("alignment files round-trip") {
    const auto dir = testing::scratch_dir("align");
    const std::vector<TimeSpan> spans{{"ni", 0.0, 0.25}, {"hao", 0.25, 0.5}};
    write_alignment(dir / "x.align", spans);
    const auto r = read_alignment(dir / "x.align");
    REQUIRE(r.size() == 2);
    CHECK(r[1].label == "hao");
    CHECK(r[1].end_s == doctest::Approx(0.5));
  }
}

TEST_CASE("feature cache stores blobs and drops other versions") {
  const auto dir = testing::scratch_dir("cache");
  FeatureCache cache(dir);
  const UtteranceFeatures f = extract_features(sine(200.0, 0.3));
  CHECK_FALSE(cache.load("u/1").has_value());
  cache.store("u/1", f);
  const auto back = cache.load("u/1");
  REQUIRE(back.has_value());
  CHECK(back->mel.values == f.mel.values);
  CHECK(back->pitch_hz == f.pitch_hz);
  CHECK(back->voiced == f.voiced);
  CHECK(back->energy == f.energy);

  // Same layout with a different version byte is treated as absent.
  const auto path = cache.path_for("u/1");
  std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
  io.seekp(4);
  const char other = static_cast<char>(kBlobVersion + 1);
  io.write(&other, 1);
  io.close();
  CHECK_FALSE(cache.load("u/1").has_value());

  write_mel(dir / "m.bin", f.mel);
  CHECK(read_mel(dir / "m.bin").values == f.mel.values);
}
