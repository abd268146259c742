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


#include "evaluation/metrics.hpp"
#include "fixtures.hpp"
#include "model/tts_model.hpp"
#include "util/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace ptts;
using namespace ptts::evaluation;

namespace {

TrackSet random_tracks(Rng& rng, std::size_t n) {
  TrackSet t;
  const double base = rng.uniform(80.0, 250.0);
  for (std::size_t i = 0; i < n; ++i) {
    const bool v = rng.uniform() < 0.8;
    t.voiced.push_back(v);
    t.pitch_hz.push_back(v ? base + 20.0 * rng.normal() : 0.0);
    t.energy.push_back(std::abs(3.0 + rng.normal()));
  }
  return t;
}

}  // namespace

TEST_CASE("track statistics") {
  const std::vector<double> x{1, 2, 3};
  const StatVector s = track_statistics(x);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.std == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(s.skew == doctest::Approx(0.0));
  CHECK(s.kurt == doctest::Approx(1.5));  // m4 / m2^2 = (2/3) / (4/9)
  CHECK_FALSE(s.degenerate);

  const std::vector<double> c(10, 4.2);
  const StatVector k = track_statistics(c);
  CHECK(k.std == 0.0);
  CHECK(k.degenerate);
  CHECK(k.skew == 0.0);
  CHECK(k.kurt == 0.0);
  CHECK_THROWS_AS(track_statistics({}), EvaluationError);

  Rng rng(123);
  std::vector<double> normal(100000);
  for (auto& v : normal) v = rng.normal();
  const StatVector n = track_statistics(normal);
  CHECK(std::abs(n.skew) < 0.05);
  CHECK(std::abs(n.kurt - 3.0) < 0.1);
}

TEST_CASE("statistics are order invariant and shift equivariant") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(2 + rng.below(200));
    for (auto& v : x) v = rng.uniform(50.0, 300.0) + (rng.uniform() < 0.1 ? 200.0 : 0.0);
    const StatVector a = track_statistics(x);
    std::vector<double> p = x;
    std::reverse(p.begin(), p.end());
    std::rotate(p.begin(), p.begin() + static_cast<long>(p.size() / 3), p.end());
    const StatVector b = track_statistics(p);
    CHECK(b.mean == doctest::Approx(a.mean).epsilon(1e-12));
    CHECK(std::abs(b.std - a.std) < 1e-9);
    CHECK(std::abs(b.skew - a.skew) < 1e-9);
    CHECK(std::abs(b.kurt - a.kurt) < 1e-9);
    const double c = rng.uniform(-1e3, 1e3);
    std::vector<double> shifted = x;
    for (auto& v : shifted) v += c;
    const StatVector s = track_statistics(shifted);
    CHECK(s.mean == doctest::Approx(a.mean + c).epsilon(1e-12));
    CHECK(std::abs(s.std - a.std) < 1e-9);
    CHECK(std::abs(s.skew - a.skew) < 1e-9);
    CHECK(std::abs(s.kurt - a.kurt) < 1e-9);
  }
}

TEST_CASE("prosody distance") {
  Rng rng(8);
  std::vector<TrackSet> xs;
  for (int i = 0; i < 6; ++i) xs.push_back(random_tracks(rng, 40 + rng.below(40)));

  SUBCASE("identical sets are at distance zero") {
    const auto d = prosody_distance(xs, xs);
    CHECK(d.pitch.mean == 0.0);
    CHECK(d.pitch.std == 0.0);
    CHECK(d.pitch.skew == 0.0);
    CHECK(d.pitch.kurt == 0.0);
    CHECK(d.energy.mean == 0.0);
    CHECK(d.energy.kurt == 0.0);
    CHECK(d.pairs == 6);
  }
  SUBCASE("symmetric in its arguments") {
    std::vector<TrackSet> ys;
    for (int i = 0; i < 6; ++i) ys.push_back(random_tracks(rng, 50));
    const auto a = prosody_distance(xs, ys), b = prosody_distance(ys, xs);
    CHECK(a.pitch.mean == b.pitch.mean);
    CHECK(a.pitch.kurt == b.pitch.kurt);
    CHECK(a.energy.std == b.energy.std);
  }
  SUBCASE("hand-built pair") {
    TrackSet g{{100, 0, 200}, {true, false, true}, {1, 2, 3}};
    TrackSet r{{150, 150, 0}, {true, true, false}, {2, 2, 2}};
    const auto d = prosody_distance({g}, {r});
    // gen pitch [100, 200]: mean 150, std 50; ref [150, 150]: mean 150, std 0.
    CHECK(d.pitch.mean == 0.0);
    CHECK(d.pitch.std == doctest::Approx(50.0));
    CHECK(d.pitch.kurt == doctest::Approx(1.0));
    // energy gen [1,2,3] mean 2 std sqrt(2/3); ref constant 2.
    CHECK(d.energy.mean == 0.0);
    CHECK(d.energy.std == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(d.energy.kurt == doctest::Approx(1.5));
  }
  SUBCASE("unvoiced pairs are left out of the pitch average") {
    TrackSet silent{{0, 0}, {false, false}, {1, 2}};
    const auto d = prosody_distance({xs[0], silent}, {xs[1], xs[2]});
    CHECK(d.pairs == 2);
    CHECK(d.pitch_pairs == 1);
    CHECK_FALSE(d.per_pair[1].pitch_valid);
  }
  CHECK_THROWS_AS(prosody_distance(xs, {xs[0]}), EvaluationError);
}

TEST_CASE("cosine and speaker similarity") {
  nn::Matrix a(1, 3), b(1, 3);
  a << 1, 2, 3;
  b << -2, 0.5, 1;
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, b) == cosine_similarity(b, a));
  CHECK(cosine_similarity(a, -a) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cosine_similarity(a, nn::Matrix::Zero(1, 3)), EvaluationError);

  model::TtsModel m(testing::tiny_config(), 2);
  Rng rng(3);
  nn::Matrix x(30, 80), y(25, 80);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-9, 0);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.uniform(-9, 0);
  CHECK(std::abs(speaker_similarity(x, x, m) - 1.0) < 1e-6);
  CHECK(speaker_similarity(x, y, m) == speaker_similarity(y, x, m));
  const double s = speaker_similarity(x, y, m);
  CHECK(s >= -1.0);
  CHECK(s <= 1.0);

  features::Waveform w;
  w.samples.resize(6000);
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    w.samples[i] = 0.3 * std::sin(2 * std::numbers::pi * 150.0 * static_cast<double>(i) / 16000.0);
  }
  CHECK(std::abs(speaker_similarity(w, w, m) - 1.0) < 1e-6);
  features::Waveform tiny;
  tiny.samples.resize(500);
  CHECK_THROWS(speaker_similarity(tiny, w, m));
}
