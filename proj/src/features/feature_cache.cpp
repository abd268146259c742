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

#include "features/feature_cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ptts::features {

static_assert(std::endian::native == std::endian::little, "blob I/O assumes little endian");

namespace {

constexpr char kMagic[4] = {'P', 'T', 'F', 'B'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

class Reader {
 public:
  Reader(std::vector<char> bytes, std::string origin)
      : bytes_(std::move(bytes)), origin_(std::move(origin)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s(bytes_.data() + pos_, n);
    pos_ += n;
    return s;
  }

  void read_doubles(double* dst, std::size_t count) {
    need(count * sizeof(double));
    std::memcpy(dst, bytes_.data() + pos_, count * sizeof(double));
    pos_ += count * sizeof(double);
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw FeatureError("truncated feature blob: " + origin_);
  }

  std::vector<char> bytes_;
  std::string origin_;
  std::size_t pos_ = 0;
};

std::string sanitize(const std::string& id) {
  std::string s = id;
  for (char& c : s) {
    if (c == '/' || c == '\\' || c == ':' || c == '\0') c = '_';
  }
  return s;
}

FeatureMatrix column(const std::vector<double>& v) {
  FeatureMatrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return m;
}

FeatureMatrix column(const std::vector<bool>& v) {
  FeatureMatrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i] ? 1.0 : 0.0;
  return m;
}

const BlobEntry& find(const std::vector<BlobEntry>& entries, const std::string& name,
                      const std::string& origin) {
  for (const BlobEntry& e : entries) {
    if (e.name == name) return e;
  }
  throw FeatureError("feature blob " + origin + " lacks entry '" + name + "'");
}

}  // namespace

void write_blob(const std::filesystem::path& path, const std::vector<BlobEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FeatureError("cannot write feature blob: " + path.string());
  out.write(kMagic, 4);
  put<std::uint8_t>(out, kBlobVersion);
  const char reserved[3] = {0, 0, 0};
  out.write(reserved, 3);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(entries.size()));
  for (const BlobEntry& e : entries) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.values.rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.values.cols()));
    put<double>(out, e.hop_s);
    out.write(reinterpret_cast<const char*>(e.values.data()),
              static_cast<std::streamsize>(e.values.size() * sizeof(double)));
  }
  if (!out) throw FeatureError("failed writing feature blob: " + path.string());
}

std::optional<std::vector<BlobEntry>> read_blob(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FeatureError("cannot open feature blob: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(bytes), path.string());
  if (r.get_string(4) != std::string(kMagic, 4)) {
    throw FeatureError("not a feature blob: " + path.string());
  }
  const auto version = r.get<std::uint8_t>();
  if (version != kBlobVersion) return std::nullopt;
  r.get_string(3);
  const auto count = r.get<std::uint32_t>();
  std::vector<BlobEntry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    BlobEntry e;
    const auto name_len = r.get<std::uint16_t>();
    e.name = r.get_string(name_len);
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    e.hop_s = r.get<double>();
    e.values.resize(rows, cols);
    r.read_doubles(e.values.data(), static_cast<std::size_t>(rows) * cols);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_mel(const std::filesystem::path& path, const MelSpectrogram& mel) {
  write_blob(path, {BlobEntry{"mel", mel.values, mel.hop_s}});
}

MelSpectrogram read_mel(const std::filesystem::path& path) {
  auto entries = read_blob(path);
  if (!entries) throw FeatureError("mel file has an unsupported version: " + path.string());
  const BlobEntry& e = find(*entries, "mel", path.string());
  MelSpectrogram mel;
  mel.values = e.values;
  mel.hop_s = e.hop_s;
  return mel;
}

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path FeatureCache::path_for(const std::string& id) const {
  return dir_ / (sanitize(id) + ".feat");
}

std::optional<UtteranceFeatures> FeatureCache::load(const std::string& id) const {
  const auto path = path_for(id);
  if (!std::filesystem::exists(path)) return std::nullopt;
  auto entries = read_blob(path);
  if (!entries) return std::nullopt;
  const std::string origin = path.string();
  UtteranceFeatures f;
  const BlobEntry& mel = find(*entries, "mel", origin);
  f.mel.values = mel.values;
  f.mel.hop_s = mel.hop_s;
  const BlobEntry& pitch = find(*entries, "pitch_hz", origin);
  const BlobEntry& voiced = find(*entries, "voiced", origin);
  const BlobEntry& energy = find(*entries, "energy", origin);
  for (Eigen::Index i = 0; i < pitch.values.rows(); ++i) {
    f.pitch_hz.push_back(pitch.values(i, 0));
    f.voiced.push_back(voiced.values(i, 0) != 0.0);
    f.energy.push_back(energy.values(i, 0));
  }
  return f;
}

void FeatureCache::store(const std::string& id, const UtteranceFeatures& features) const {
  write_blob(path_for(id), {BlobEntry{"mel", features.mel.values, features.mel.hop_s},
                            BlobEntry{"pitch_hz", column(features.pitch_hz), features.mel.hop_s},
                            BlobEntry{"voiced", column(features.voiced), features.mel.hop_s},
                            BlobEntry{"energy", column(features.energy), features.mel.hop_s}});
}

}  // namespace ptts::features
