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

#include "nn/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace ptts::nn {

double scheduled_learning_rate(const AdamOptions& opts, long step) {
  if (step < 1) step = 1;
  if (opts.warmup_steps <= 0) return opts.learning_rate;
  const double s = static_cast<double>(step);
  const double w = static_cast<double>(opts.warmup_steps);
  return opts.learning_rate * std::min(s / w, std::sqrt(w / s));
}

bool is_frozen(const std::string& name, const std::set<std::string>& frozen) {
  return std::any_of(frozen.begin(), frozen.end(),
                     [&](const std::string& module) { return in_module(name, module); });
}

double Adam::step(ParameterStore& store, const std::set<std::string>& frozen) {
  ++step_;
  const double lr = scheduled_learning_rate(opts_, step_);

  double clip_scale = 1.0;
  if (opts_.grad_clip > 0.0) {
    double sq = 0.0;
    for (const auto& [name, t] : store.all()) {
      if (t.grad().size() == 0 || is_frozen(name, frozen)) continue;
      sq += t.grad().squaredNorm();
    }
    const double norm = std::sqrt(sq);
    if (norm > opts_.grad_clip) clip_scale = opts_.grad_clip / norm;
  }

  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(step_));
  for (const auto& [name, t] : store.all()) {
    if (t.grad().size() == 0 || is_frozen(name, frozen)) continue;
    Matrix& m = m_[name];
    Matrix& v = v_[name];
    if (m.size() == 0) {
      m = Matrix::Zero(t.rows(), t.cols());
      v = Matrix::Zero(t.rows(), t.cols());
    }
    const Matrix g = t.grad() * clip_scale;
    m = opts_.beta1 * m + (1.0 - opts_.beta1) * g;
    v = opts_.beta2 * v + (1.0 - opts_.beta2) * g.cwiseProduct(g);
    Tensor param = t;
    param.mutable_value().array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + opts_.epsilon);
  }
  return lr;
}

}  // namespace ptts::nn
