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

#include "biopipe/core/adam.hpp"

#include <cmath>

namespace biopipe {

void adam_step(const ParamList& params, OptimizerState& state) {
  if (state.first_moment.empty()) {
    for (const auto& [name, p] : params) {
      state.first_moment.emplace_back(p->value.shape());
      state.second_moment.emplace_back(p->value.shape());
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Parameter& p = *params[i].second;
    if (!(p.grad.shape() == p.value.shape()) || !(state.first_moment[i].shape() == p.value.shape())) {
      throw ShapeError("adam_step: shape mismatch for " + params[i].first);
    }
  }
  if (state.config.clip_norm > 0) clip_grad_norm(params, state.config.clip_norm);

  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i].second;
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    for (std::size_t k = 0; k < p.value.size(); ++k) {
      const double g = p.grad[k];
      m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g;
      v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g * g;
      const double mhat = m[k] / correct1;
      const double vhat = v[k] / correct2;
      p.value[k] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
  }
}

double clip_grad_norm(const ParamList& params, double max_norm) {
  double sq = 0;
  for (const auto& [name, p] : params) {
    for (const double g : p->grad.data()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0) {
    const double s = max_norm / norm;
    for (const auto& [name, p] : params) {
      for (double& g : p->grad.data()) g *= s;
    }
  }
  return norm;
}

}  // namespace biopipe
