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
#include "model/tts_model.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptts::evaluation {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Population moments; kurtosis is non-excess (3 for a normal).
struct StatVector {
  double mean = 0.0;
  double std = 0.0;
  double skew = 0.0;
  double kurt = 0.0;
  bool degenerate = false;  // zero variance: skew and kurt reported as 0
};

StatVector track_statistics(std::span<const double> values);

struct TrackSet {
  std::vector<double> pitch_hz;
  std::vector<bool> voiced;
  std::vector<double> energy;
};

/// Voiced pitch values (Hz).
std::vector<double> voiced_pitch(const TrackSet& t);

struct StatDifference {
  double mean = 0.0;
  double std = 0.0;
  double skew = 0.0;
  double kurt = 0.0;
};

struct PairDistance {
  StatDifference pitch;
  StatDifference energy;
  bool pitch_valid = true;  // false when either side has no voiced frames
};

struct ProsodyDistance {
  StatDifference pitch;   // averaged over pairs with voiced frames on both sides
  StatDifference energy;  // averaged over all pairs
  std::size_t pairs = 0;
  std::size_t pitch_pairs = 0;
  std::vector<PairDistance> per_pair;
};

ProsodyDistance prosody_distance(const std::vector<TrackSet>& gen,
                                 const std::vector<TrackSet>& ref);

double cosine_similarity(const nn::Matrix& a, const nn::Matrix& b);

/// Cosine between timbre embeddings of two log-mel spectrograms.
double speaker_similarity(const nn::Matrix& log_mel_a, const nn::Matrix& log_mel_b,
                          const model::TtsModel& model);
double speaker_similarity(const features::Waveform& a, const features::Waveform& b,
                          const model::TtsModel& model);

}  // namespace ptts::evaluation
