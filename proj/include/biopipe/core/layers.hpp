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

#ifndef BIOPIPE_CORE_LAYERS_HPP_
#define BIOPIPE_CORE_LAYERS_HPP_

#include <span>
#include <utility>
#include <vector>

#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/tensor.hpp"

namespace biopipe {

// Graph ops take parameters by mutable reference because backward() writes
// their gradients. Inference never calls backward, so frozen models are
// passed through this.
template <typename T>
T& unfrozen(const T& frozen) {
  return const_cast<T&>(frozen);
}

// One LSTM recurrence on plain tensors.
std::pair<Tensor, Tensor> lstm_step(const Tensor& x, const Tensor& h, const Tensor& c, const LstmParams& p);

// Position i holds [forward state after xs[0..i]; backward state after xs[i..]].
std::vector<Tensor> bilstm_encode(const std::vector<Tensor>& xs, const LstmParams& fwd, const LstmParams& bwd);

Tensor biaffine_score(const Tensor& left, const Tensor& right, const BiaffineParams& p);

// Hidden states of a unidirectional LSTM from the zero state, reported in
// input order. With reverse set, the sequence is consumed right to left.
std::vector<Var> run_lstm(Graph& g, std::span<const Var> xs, LstmParams& p, bool reverse = false);

std::vector<Var> run_bilstm(Graph& g, std::span<const Var> xs, LstmParams& fwd, LstmParams& bwd);

// Index of the largest entry; the lowest index wins ties.
std::size_t argmax(std::span<const double> v);

}  // namespace biopipe

#endif  // BIOPIPE_CORE_LAYERS_HPP_
