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

#include "nn/parameters.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ptts::nn {

Tensor ParameterStore::create(const std::string& name, Matrix init) {
  if (params_.count(name) != 0) throw std::logic_error("duplicate parameter: " + name);
  Tensor t = leaf(std::move(init), true);
  params_.emplace(name, t);
  return t;
}

Tensor ParameterStore::get(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

void ParameterStore::zero_grad() {
  for (auto& [name, t] : params_) {
    Tensor copy = t;
    copy.zero_grad();
  }
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += static_cast<std::size_t>(t.value().size());
  return n;
}

std::uint64_t ParameterStore::checksum(std::string_view prefix) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& [name, t] : params_) {
    if (!prefix.empty() && !in_module(name, prefix)) continue;
    const auto* bytes = reinterpret_cast<const unsigned char*>(t.value().data());
    const std::size_t len = static_cast<std::size_t>(t.value().size()) * sizeof(double);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

Matrix glorot(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix m(fan_in, fan_out);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
  return m;
}

Matrix normal_init(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = stddev * rng.normal();
  return m;
}

bool in_module(std::string_view name, std::string_view module) {
  if (name.size() < module.size()) return false;
  if (name.substr(0, module.size()) != module) return false;
  return name.size() == module.size() || name[module.size()] == '.';
}

}  // namespace ptts::nn
