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

#include "nn/autograd.hpp"
#include "util/random.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace ptts::nn {

/// Named trainable tensors. Names are dotted paths whose first component is
/// the owning module ("decoder.layer3.conv.weight").
class ParameterStore {
 public:
  Tensor create(const std::string& name, Matrix init);
  Tensor get(const std::string& name) const;
  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  const std::map<std::string, Tensor>& all() const { return params_; }

  void zero_grad();
  std::size_t scalar_count() const;

  /// FNV-1a over the raw bytes of every parameter whose name starts with
  /// `prefix` (all parameters for an empty prefix).
  std::uint64_t checksum(std::string_view prefix = {}) const;

 private:
  std::map<std::string, Tensor> params_;
};

/// Glorot-uniform initialisation for a fan_in x fan_out matrix.
Matrix glorot(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng);
Matrix normal_init(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

/// True when `name` belongs to module `module` (exact first path segment).
bool in_module(std::string_view name, std::string_view module);

}  // namespace ptts::nn
