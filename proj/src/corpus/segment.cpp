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

#include "corpus/pipeline.hpp"
#include "util/text.hpp"

#include <cmath>
#include <limits>

namespace ptts::corpus {

AlignedToken make_token(std::string token, double start_s, double end_s) {
  AlignedToken t;
  const std::u32string cps = text::decode_utf8(token);
  bool all_punct = !cps.empty();
  bool any_stop = false;
  for (char32_t c : cps) {
    if (!text::is_punctuation(c)) all_punct = false;
    if (text::is_stop_punctuation(c)) any_stop = true;
  }
  t.is_stop_punct = all_punct && any_stop;
  t.is_minor_punct = all_punct && !any_stop;
  t.token = std::move(token);
  t.start_s = start_s;
  t.end_s = end_s;
  return t;
}

std::string_view cut_rule_name(CutRule rule) {
  switch (rule) {
    case CutRule::Stop:
      return "stop";
    case CutRule::Minor:
      return "minor";
    case CutRule::Nearest:
      return "nearest";
    case CutRule::NoCutPoint:
      return "no-cut-point";
  }
  return "stop";
}

std::vector<Segment> segment_utterance(const std::vector<AlignedToken>& tokens,
                                       SegmentWindow window) {
  if (tokens.empty()) throw CorpusError("segment_utterance: empty token list");
  if (!(window.min_s <= window.max_s)) throw CorpusError("segment_utterance: min_s > max_s");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].end_s < tokens[i].start_s) {
      throw CorpusError("segment_utterance: token " + std::to_string(i) + " ends before it starts");
    }
    if (i > 0 && tokens[i].start_s < tokens[i - 1].end_s - 1e-9) {
      throw CorpusError("segment_utterance: tokens overlap or are out of order at index " +
                        std::to_string(i));
    }
  }

  const std::size_t n = tokens.size();
  bool any_punct = false;
  for (const AlignedToken& t : tokens) any_punct = any_punct || t.is_stop_punct || t.is_minor_punct;

  auto make_segment = [&](double start, std::size_t first, std::size_t last, CutRule rule) {
    Segment s;
    s.start_s = start;
    s.end_s = tokens[last].end_s;
    s.first_token = first;
    s.last_token = last;
    s.rule = rule;
    for (std::size_t k = first; k <= last; ++k) s.text += tokens[k].token;
    s.below_window = s.duration_s() < window.min_s;
    s.above_window = s.duration_s() > window.max_s;
    return s;
  };

  std::vector<Segment> out;
  if (!any_punct) {
    out.push_back(make_segment(tokens.front().start_s, 0, n - 1, CutRule::NoCutPoint));
    return out;
  }

  auto inside = [&](double d) { return d >= window.min_s && d <= window.max_s; };
  auto distance = [&](double d) {
    if (d < window.min_s) return window.min_s - d;
    if (d > window.max_s) return d - window.max_s;
    return 0.0;
  };

  std::size_t first = 0;
  double seg_start = tokens.front().start_s;
  while (first < n) {
    std::optional<std::size_t> stop_cut, minor_cut, nearest_cut;
    double nearest_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = first; j < n; ++j) {
      const bool is_end = j + 1 == n;
      const bool stop = tokens[j].is_stop_punct || is_end;
      const bool minor = tokens[j].is_minor_punct;
      if (!stop && !minor) continue;
      const double d = tokens[j].end_s - seg_start;
      if (inside(d)) {
        if (stop) stop_cut = j;
        if (minor) minor_cut = j;
      }
      const double gap = distance(d);
      if (gap < nearest_gap) {
        nearest_gap = gap;
        nearest_cut = j;
      }
      // Later cuts only get longer: none can be admissible or nearer.
      if (d > window.max_s) break;
    }
    std::size_t cut;
    CutRule rule;
    if (stop_cut) {
      cut = *stop_cut;
      rule = CutRule::Stop;
    } else if (minor_cut) {
      cut = *minor_cut;
      rule = CutRule::Minor;
    } else {
      cut = *nearest_cut;
      rule = CutRule::Nearest;
    }
    Segment s = make_segment(seg_start, first, cut, rule);
    seg_start = s.end_s;
    first = cut + 1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ptts::corpus
