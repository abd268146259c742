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

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ptts::features {

std::vector<int> durations_from_alignment(std::size_t phoneme_count,
                                          const std::vector<TimeSpan>& alignment,
                                          int total_frames, double hop_s) {
  if (alignment.size() != phoneme_count) {
    throw FeatureError("alignment has " + std::to_string(alignment.size()) +
                       " spans but there are " + std::to_string(phoneme_count) + " phonemes");
  }
  if (phoneme_count == 0) throw FeatureError("durations_from_alignment: no phonemes");
  if (total_frames < 0) throw FeatureError("durations_from_alignment: negative frame total");

  std::vector<int> d(phoneme_count);
  long sum = 0;
  for (std::size_t i = 0; i < phoneme_count; ++i) {
    const double len = alignment[i].end_s - alignment[i].start_s;
    if (len < 0) throw FeatureError("alignment span ends before it starts: " + alignment[i].label);
    d[i] = static_cast<int>(std::lround(len / hop_s));
    sum += d[i];
  }
  long residual = total_frames - sum;
  // Residual goes to the last phoneme; an overshoot larger than the last
  // phoneme is taken from earlier ones, walking backwards.
  for (std::size_t i = phoneme_count; i-- > 0 && residual != 0;) {
    if (residual > 0) {
      d[i] += static_cast<int>(residual);
      residual = 0;
    } else {
      const long take = std::min<long>(-residual, d[i]);
      d[i] -= static_cast<int>(take);
      residual += take;
    }
  }
  return d;
}

std::vector<TimeSpan> read_alignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FeatureError("cannot open alignment file: " + path.string());
  std::vector<TimeSpan> spans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    TimeSpan s;
    if (!(ls >> s.label >> s.start_s >> s.end_s)) {
      throw FeatureError(path.string() + ":" + std::to_string(line_no) +
                         ": expected 'token start end'");
    }
    if (s.end_s < s.start_s) {
      throw FeatureError(path.string() + ":" + std::to_string(line_no) + ": end before start");
    }
    spans.push_back(std::move(s));
  }
  return spans;
}

void write_alignment(const std::filesystem::path& path, const std::vector<TimeSpan>& spans) {
  std::ofstream out(path);
  if (!out) throw FeatureError("cannot write alignment file: " + path.string());
  out << std::setprecision(17);
  for (const TimeSpan& s : spans) out << s.label << '\t' << s.start_s << '\t' << s.end_s << '\n';
}

}  // namespace ptts::features
