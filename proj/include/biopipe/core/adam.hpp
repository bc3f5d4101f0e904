// Copyright 2026 The Biopipe Authors.
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

#ifndef BIOPIPE_CORE_ADAM_HPP_
#define BIOPIPE_CORE_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "biopipe/core/params.hpp"

namespace biopipe {

struct AdamConfig {
  double learning_rate = 2e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Global gradient-norm clip; zero disables clipping.
  double clip_norm = 5.0;
};

struct OptimizerState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  OptimizerState() = default;
  explicit OptimizerState(AdamConfig c) : config(c) {}
};

// Bias-corrected Adam update of every parameter in the list from its grad.
// Moment buffers are created on the first call and must keep matching the
// parameter shapes afterwards.
void adam_step(const ParamList& params, OptimizerState& state);

// Scales gradients so their global L2 norm is at most max_norm. Returns the
// norm before scaling.
double clip_grad_norm(const ParamList& params, double max_norm);

}  // namespace biopipe

#endif  // BIOPIPE_CORE_ADAM_HPP_
