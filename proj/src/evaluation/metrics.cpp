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

#include "features/mel.hpp"
#include "util/moments.hpp"

#include <cmath>

namespace ptts::evaluation {

namespace {

StatDifference difference(const StatVector& a, const StatVector& b) {
  return {std::fabs(a.mean - b.mean), std::fabs(a.std - b.std), std::fabs(a.skew - b.skew),
          std::fabs(a.kurt - b.kurt)};
}

void accumulate(StatDifference& acc, const StatDifference& d) {
  acc.mean += d.mean;
  acc.std += d.std;
  acc.skew += d.skew;
  acc.kurt += d.kurt;
}

void divide(StatDifference& acc, std::size_t n) {
  if (n == 0) return;
  const double inv = 1.0 / static_cast<double>(n);
  acc.mean *= inv;
  acc.std *= inv;
  acc.skew *= inv;
  acc.kurt *= inv;
}

}  // namespace

StatVector track_statistics(std::span<const double> values) {
  if (values.empty()) throw EvaluationError("track_statistics: empty input");
  const CentralMoments m = central_moments(values);
  StatVector s;
  s.mean = m.mean;
  s.std = std::sqrt(m.m2);
  if (m.m2 <= 0.0) {
    s.degenerate = true;
    return s;
  }
  s.skew = m.m3 / std::pow(m.m2, 1.5);
  s.kurt = m.m4 / (m.m2 * m.m2);
  return s;
}

std::vector<double> voiced_pitch(const TrackSet& t) {
  std::vector<double> out;
  for (std::size_t i = 0; i < t.pitch_hz.size(); ++i) {
    const bool v = i < t.voiced.size() ? t.voiced[i] : t.pitch_hz[i] > 0.0;
    if (v && t.pitch_hz[i] > 0.0) out.push_back(t.pitch_hz[i]);
  }
  return out;
}

ProsodyDistance prosody_distance(const std::vector<TrackSet>& gen,
                                 const std::vector<TrackSet>& ref) {
  if (gen.size() != ref.size()) {
    throw EvaluationError("prosody_distance: " + std::to_string(gen.size()) +
                          " generated tracks but " + std::to_string(ref.size()) + " references");
  }
  ProsodyDistance out;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    PairDistance pair;
    const auto gp = voiced_pitch(gen[i]);
    const auto rp = voiced_pitch(ref[i]);
    if (gp.empty() || rp.empty()) {
      pair.pitch_valid = false;
    } else {
      pair.pitch = difference(track_statistics(gp), track_statistics(rp));
      accumulate(out.pitch, pair.pitch);
      ++out.pitch_pairs;
    }
    pair.energy = difference(track_statistics(gen[i].energy), track_statistics(ref[i].energy));
    accumulate(out.energy, pair.energy);
    out.per_pair.push_back(pair);
  }
  out.pairs = gen.size();
  divide(out.pitch, out.pitch_pairs);
  divide(out.energy, out.pairs);
  return out;
}

double cosine_similarity(const nn::Matrix& a, const nn::Matrix& b) {
  if (a.size() != b.size()) throw EvaluationError("cosine_similarity: width mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw EvaluationError("speaker similarity is undefined for a zero embedding");
  }
  const double dot = (a.array() * b.array()).sum();
  return std::max(-1.0, std::min(1.0, dot / (na * nb)));
}

double speaker_similarity(const nn::Matrix& log_mel_a, const nn::Matrix& log_mel_b,
                          const model::TtsModel& model) {
  nn::NoGradGuard no_grad;
  const nn::Matrix ea = model.timbre_encode(log_mel_a).value();
  const nn::Matrix eb = model.timbre_encode(log_mel_b).value();
  return cosine_similarity(ea, eb);
}

double speaker_similarity(const features::Waveform& a, const features::Waveform& b,
                          const model::TtsModel& model) {
  const auto fa = features::extract_features_any_rate(a);
  const auto fb = features::extract_features_any_rate(b);
  return speaker_similarity(fa.mel.values, fb.mel.values, model);
}

}  // namespace ptts::evaluation
