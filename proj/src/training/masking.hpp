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

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ptts::training {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MaskMode { Posterior, RandomContiguous };

struct MaskSpec {
  double ratio = 0.6;
  MaskMode mode = MaskMode::Posterior;
};

/// floor(length * (1 - ratio)); the first hidden frame of a posterior mask.
std::size_t posterior_boundary(std::size_t length, double ratio);

/// mask[i] = (i >= posterior_boundary(length, ratio)); true means hidden.
std::vector<bool> build_posterior_mask(std::size_t length, double ratio);

/// A hidden span of the same size as the posterior mask at a random offset.
std::vector<bool> build_random_contiguous_mask(std::size_t length, double ratio, Rng& rng);

std::vector<bool> build_mask(std::size_t length, const MaskSpec& spec, Rng& rng);

/// A phoneme is hidden iff its frame span intersects the hidden frames. A
/// zero-length phoneme takes the state of the frame it starts at.
std::vector<bool> mask_durations(const std::vector<int>& durations,
                                 const std::vector<bool>& frame_mask);

/// L1 over hidden positions, averaged by their count; 0 when none are hidden.
nn::Tensor mpp_loss(const nn::Tensor& predictions, const nn::Matrix& targets,
                    const std::vector<bool>& mask);

}  // namespace ptts::training
