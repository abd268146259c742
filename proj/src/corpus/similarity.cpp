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

#include <algorithm>
#include <numeric>

namespace ptts::corpus {

std::u32string normalize_for_similarity(std::string_view s) {
  std::u32string out;
  for (char32_t c : text::decode_utf8(s)) {
    if (text::is_whitespace(c) || text::is_punctuation(c)) continue;
    out.push_back(text::fold_case(c));
  }
  return out;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double text_similarity(std::string_view a, std::string_view b) {
  const std::u32string na = normalize_for_similarity(a);
  const std::u32string nb = normalize_for_similarity(b);
  const std::size_t longest = std::max(na.size(), nb.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(na, nb)) / static_cast<double>(longest);
}

FilterResult asr_filter(const Manifest& entries, double threshold) {
  FilterResult result;
  for (const ManifestEntry& e : entries) {
    if (!e.transcript) {
      result.rejected.push_back({e.id, 0.0, "no-transcript"});
      continue;
    }
    const double sim = text_similarity(e.text, *e.transcript);
    if (sim >= threshold) {
      result.kept.push_back(e);
    } else {
      result.rejected.push_back({e.id, sim, "below-threshold"});
    }
  }
  return result;
}

}  // namespace ptts::corpus
