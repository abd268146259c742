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


#include "inference/g2p.hpp"

#include "util/text.hpp"

#include <algorithm>
#include <set>

namespace ptts::inference {

PhonemeInventory::PhonemeInventory(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw G2PError("phoneme inventory contains an empty symbol");
    if (!seen.insert(s).second) throw G2PError("duplicate phoneme symbol '" + s + "'");
  }
}

std::optional<int> PhonemeInventory::id_of(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<int>(it - symbols_.begin());
}

std::vector<int> PhonemeInventory::ids_of(const std::vector<std::string>& symbols) const {
  std::vector<int> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) {
    auto id = id_of(s);
    if (!id) throw G2PError("phoneme '" + s + "' is not in the inventory");
    out.push_back(*id);
  }
  return out;
}

std::vector<std::string> g2p(std::string_view text, const PhonemeInventory& inventory) {
  std::u32string chars;
  for (char32_t c : text::decode_utf8(text)) {
    if (text::is_whitespace(c) || text::is_punctuation(c)) continue;
    chars.push_back(text::fold_case(c));
  }
  std::vector<std::u32string> symbols;
  for (const auto& s : inventory.symbols()) symbols.push_back(text::decode_utf8(s));

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < chars.size()) {
    std::size_t best = 0;
    std::size_t best_len = 0;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
      const auto& s = symbols[k];
      if (s.size() > best_len && chars.compare(i, s.size(), s) == 0) {
        best = k;
        best_len = s.size();
      }
    }
    if (best_len == 0) {
      throw G2PError("cannot convert character '" + text::encode_utf8(chars[i]) +
                     "' to a phoneme");
    }
    out.push_back(inventory.symbols()[best]);
    i += best_len;
  }
  if (out.empty()) throw G2PError("text contains no pronounceable characters");
  return out;
}

std::vector<std::string> character_symbols(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t c : text::decode_utf8(text)) {
    if (text::is_whitespace(c) || text::is_punctuation(c)) continue;
    out.push_back(text::encode_utf8(text::fold_case(c)));
  }
  return out;
}

}  // namespace ptts::inference
