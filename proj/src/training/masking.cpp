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


#include "training/masking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptts::training {

namespace {

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw TrainingError("mask ratio " + std::to_string(ratio) + " outside [0, 1]");
  }
}

}  // namespace

std::size_t posterior_boundary(std::size_t length, double ratio) {
  check_ratio(ratio);
  // The tolerance keeps decimal ratios exact: 90 * (1 - 0.3) evaluates to
  // 62.999..., but the boundary is 63.
  const double visible = static_cast<double>(length) * (1.0 - ratio);
  return std::min(length, static_cast<std::size_t>(std::floor(visible + 1e-9 * std::max(1.0, visible))));
}

std::vector<bool> build_posterior_mask(std::size_t length, double ratio) {
  if (length < 1) throw TrainingError("mask length must be at least 1");
  const std::size_t boundary = posterior_boundary(length, ratio);
  std::vector<bool> mask(length, false);
  for (std::size_t i = boundary; i < length; ++i) mask[i] = true;
  return mask;
}

std::vector<bool> build_random_contiguous_mask(std::size_t length, double ratio, Rng& rng) {
  if (length < 1) throw TrainingError("mask length must be at least 1");
  const std::size_t hidden = length - posterior_boundary(length, ratio);
  const std::size_t start = rng.below(length - hidden + 1);
  std::vector<bool> mask(length, false);
  for (std::size_t i = start; i < start + hidden; ++i) mask[i] = true;
  return mask;
}

std::vector<bool> build_mask(std::size_t length, const MaskSpec& spec, Rng& rng) {
  return spec.mode == MaskMode::Posterior ? build_posterior_mask(length, spec.ratio)
                                          : build_random_contiguous_mask(length, spec.ratio, rng);
}

std::vector<bool> mask_durations(const std::vector<int>& durations,
                                 const std::vector<bool>& frame_mask) {
  std::size_t total = 0;
  for (int d : durations) {
    if (d < 0) throw TrainingError("negative duration");
    total += static_cast<std::size_t>(d);
  }
  if (total != frame_mask.size()) {
    throw TrainingError("durations sum to " + std::to_string(total) + " but the frame mask has " +
                        std::to_string(frame_mask.size()) + " frames");
  }
  std::vector<bool> out(durations.size(), false);
  std::size_t start = 0;
  for (std::size_t p = 0; p < durations.size(); ++p) {
    const auto d = static_cast<std::size_t>(durations[p]);
    if (d == 0) {
      if (!frame_mask.empty()) out[p] = frame_mask[std::min(start, frame_mask.size() - 1)];
    } else {
      for (std::size_t f = start; f < start + d; ++f) {
        if (frame_mask[f]) {
          out[p] = true;
          break;
        }
      }
    }
    start += d;
  }
  return out;
}

nn::Tensor mpp_loss(const nn::Tensor& predictions, const nn::Matrix& targets,
                    const std::vector<bool>& mask) {
  return nn::masked_l1(predictions, targets, mask);
}

}  // namespace ptts::training
