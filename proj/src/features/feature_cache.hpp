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

// Feature blob layout (little endian):
//
//   "PTFB"            4 bytes magic
//   version           u8  (kBlobVersion)
//   reserved          3 bytes, zero
//   entry count       u32
//   per entry:
//     name length     u16, then the name bytes (UTF-8)
//     rows, cols      u32, u32
//     hop seconds     f64 (frame period; 0 when not frame-aligned)
//     values          rows*cols f64, row major
//
// Synthesised mel output uses the same layout with a single "mel" entry.

#include "features/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ptts::features {

inline constexpr std::uint8_t kBlobVersion = 1;

struct BlobEntry {
  std::string name;
  FeatureMatrix values;
  double hop_s = 0.0;
};

void write_blob(const std::filesystem::path& path, const std::vector<BlobEntry>& entries);

/// Throws on malformed files. Returns nullopt when the version byte differs
/// from `kBlobVersion` (stale cache).
std::optional<std::vector<BlobEntry>> read_blob(const std::filesystem::path& path);

void write_mel(const std::filesystem::path& path, const MelSpectrogram& mel);
MelSpectrogram read_mel(const std::filesystem::path& path);

class FeatureCache {
 public:
  explicit FeatureCache(std::filesystem::path dir);

  std::filesystem::path path_for(const std::string& id) const;
  /// nullopt when absent or written by another blob version.
  std::optional<UtteranceFeatures> load(const std::string& id) const;
  void store(const std::string& id, const UtteranceFeatures& features) const;

  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace ptts::features
