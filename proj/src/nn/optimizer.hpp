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

#include "nn/parameters.hpp"

#include <map>
#include <set>
#include <string>

namespace ptts::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-9;
  int warmup_steps = 100;
  double grad_clip = 1.0;  // global L2 norm; <= 0 disables
};

/// Linear warmup followed by inverse-square-root decay.
double scheduled_learning_rate(const AdamOptions& opts, long step);

class Adam {
 public:
  explicit Adam(AdamOptions opts = {}) : opts_(opts) {}

  /// Applies one update to every parameter outside `frozen` modules. Frozen
  /// parameters are never written. Returns the learning rate used.
  double step(ParameterStore& store, const std::set<std::string>& frozen);

  long steps_taken() const { return step_; }
  const AdamOptions& options() const { return opts_; }

  /// Moment buffers, keyed like the store (used by checkpointing).
  std::map<std::string, Matrix>& first_moments() { return m_; }
  std::map<std::string, Matrix>& second_moments() { return v_; }
  void set_steps_taken(long s) { step_ = s; }

 private:
  AdamOptions opts_;
  long step_ = 0;
  std::map<std::string, Matrix> m_;
  std::map<std::string, Matrix> v_;
};

bool is_frozen(const std::string& name, const std::set<std::string>& frozen);

}  // namespace ptts::nn
