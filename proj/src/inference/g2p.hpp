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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptts::inference {

class G2PError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PhonemeInventory {
 public:
  PhonemeInventory() = default;
  explicit PhonemeInventory(std::vector<std::string> symbols);

  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  std::optional<int> id_of(std::string_view symbol) const;
  /// Throws G2PError for symbols outside the inventory.
  std::vector<int> ids_of(const std::vector<std::string>& symbols) const;

 private:
  std::vector<std::string> symbols_;
};

/// Character-level fallback G2P: case-folds, drops whitespace and
/// punctuation, and matches the longest inventory symbol at each position.
/// Throws G2PError naming the first character no symbol covers.
std::vector<std::string> g2p(std::string_view text, const PhonemeInventory& inventory);

/// Symbols a character-level G2P would emit for `text` with an open
/// inventory (one per spoken character).
std::vector<std::string> character_symbols(std::string_view text);

}  // namespace ptts::inference
