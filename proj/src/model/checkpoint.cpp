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


#include "model/checkpoint.hpp"

#include <cstring>
#include <fstream>

// Layout (little-endian):
//   "PTCK" u8 version
//   u32 len, config text ("key=value" lines)
//   i64 step
//   u32 count, then count x (u32 len, symbol bytes)
//   u32 count, then count x (u32 len, name, u32 rows, u32 cols, rows*cols f64)

namespace ptts::model {

namespace {

constexpr char kMagic[4] = {'P', 'T', 'C', 'K'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in, const std::string& origin) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw ModelError(origin + ": truncated checkpoint");
  }
  return v;
}

std::string get_string(std::istream& in, const std::string& origin) {
  const auto n = get<std::uint32_t>(in, origin);
  if (n > (1u << 28)) throw ModelError(origin + ": corrupt string length");
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) throw ModelError(origin + ": truncated checkpoint");
  return s;
}

struct Contents {
  ModelConfig config;
  long step = 0;
  std::vector<std::string> symbols;
  std::vector<std::pair<std::string, Matrix>> arrays;
};

Contents read_contents(const std::filesystem::path& path) {
  const std::string origin = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open checkpoint " + origin);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw ModelError(origin + ": not a checkpoint file");
  }
  const auto version = get<std::uint8_t>(in, origin);
  if (version != kCheckpointVersion) {
    throw ModelError(origin + ": checkpoint version " + std::to_string(version) +
                     " is not supported");
  }
  Contents c;
  c.config = parse_model_config(get_string(in, origin));
  c.step = static_cast<long>(get<std::int64_t>(in, origin));
  const auto symbols = get<std::uint32_t>(in, origin);
  for (std::uint32_t i = 0; i < symbols; ++i) c.symbols.push_back(get_string(in, origin));
  const auto arrays = get<std::uint32_t>(in, origin);
  for (std::uint32_t i = 0; i < arrays; ++i) {
    std::string name = get_string(in, origin);
    const auto rows = get<std::uint32_t>(in, origin);
    const auto cols = get<std::uint32_t>(in, origin);
    Matrix m(rows, cols);
    const auto bytes = static_cast<std::streamsize>(sizeof(double) * rows * cols);
    if (bytes > 0 && !in.read(reinterpret_cast<char*>(m.data()), bytes)) {
      throw ModelError(origin + ": truncated checkpoint");
    }
    c.arrays.emplace_back(std::move(name), std::move(m));
  }
  return c;
}

void assign(const Contents& c, TtsModel& model, const std::string& origin) {
  auto& params = model.parameters().all();
  if (c.arrays.size() != params.size()) {
    throw ModelError(origin + ": checkpoint holds " + std::to_string(c.arrays.size()) +
                     " arrays, model has " + std::to_string(params.size()));
  }
  for (const auto& [name, values] : c.arrays) {
    auto it = params.find(name);
    if (it == params.end()) throw ModelError(origin + ": unexpected array '" + name + "'");
    nn::Tensor t = it->second;
    if (t.rows() != values.rows() || t.cols() != values.cols()) {
      throw ModelError(origin + ": shape mismatch for '" + name + "'");
    }
    t.mutable_value() = values;
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TtsModel& model,
                     const std::vector<std::string>& phoneme_symbols, long step) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelError("cannot write checkpoint " + path.string());
    out.write(kMagic, 4);
    put<std::uint8_t>(out, kCheckpointVersion);
    put_string(out, format_model_config(model.config()));
    put<std::int64_t>(out, step);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(phoneme_symbols.size()));
    for (const auto& s : phoneme_symbols) put_string(out, s);
    const auto& params = model.parameters().all();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& [name, t] : params) {
      put_string(out, name);
      put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rows()));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(t.cols()));
      out.write(reinterpret_cast<const char*>(t.value().data()),
                static_cast<std::streamsize>(sizeof(double) * t.value().size()));
    }
    if (!out) throw ModelError("failed writing checkpoint " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  Contents c = read_contents(path);
  Checkpoint out;
  out.model = std::make_unique<TtsModel>(c.config, 0);
  assign(c, *out.model, path.string());
  out.phoneme_symbols = std::move(c.symbols);
  out.step = c.step;
  return out;
}

void load_weights(const std::filesystem::path& path, TtsModel& model) {
  Contents c = read_contents(path);
  if (!(c.config == model.config())) {
    throw ModelError(path.string() + ": checkpoint config does not match the model config");
  }
  assign(c, model, path.string());
}

}  // namespace ptts::model
