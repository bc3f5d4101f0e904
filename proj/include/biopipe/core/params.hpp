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

#ifndef BIOPIPE_CORE_PARAMS_HPP_
#define BIOPIPE_CORE_PARAMS_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "biopipe/core/tensor.hpp"
#include "biopipe/random.hpp"

namespace biopipe {

// A trainable array together with its gradient accumulator.
struct Parameter {
  Tensor value;
  Tensor grad;

  Parameter() = default;
  explicit Parameter(Shape shape) : value(shape), grad(shape) {}

  void init_uniform(Rng& rng, double scale = 0.1) {
    for (double& v : value.data()) v = rng.uniform(-scale, scale);
  }
  void zero_grad() { grad.fill(0.0); }
};

using ParamList = std::vector<std::pair<std::string, Parameter*>>;

// Single-direction LSTM. Each gate owns a hidden x (input + hidden) matrix.
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Parameter w_input, w_forget, w_output, w_cell;
  Parameter b_input, b_forget, b_output, b_cell;

  LstmParams() = default;
  LstmParams(std::size_t input, std::size_t hidden);

  void init(Rng& rng);
  void collect(const std::string& prefix, ParamList& out);
};

// score_o = left' U[:,:,o] right + W [left; right] + b.
struct BiaffineParams {
  std::size_t left_dim = 0;
  std::size_t right_dim = 0;
  std::size_t out_dim = 0;
  Parameter u;  // left x right x out
  Parameter w;  // out x (left + right)
  Parameter b;  // out

  BiaffineParams() = default;
  BiaffineParams(std::size_t left, std::size_t right, std::size_t out);

  void init(Rng& rng);
  void collect(const std::string& prefix, ParamList& out);
};

// Linear-chain CRF scores. transitions.at(from, to).
struct CrfParams {
  std::size_t num_labels = 0;
  Parameter transitions;
  Parameter start;
  Parameter stop;

  CrfParams() = default;
  explicit CrfParams(std::size_t labels);

  void init(Rng& rng);
  void collect(const std::string& prefix, ParamList& out);
};

struct Linear {
  Parameter w;  // out x in
  Parameter b;  // out

  Linear() = default;
  Linear(std::size_t in, std::size_t out) : w(Shape{out, in}), b(Shape{out}) {}

  std::size_t in_dim() const { return w.value.dim(1); }
  std::size_t out_dim() const { return w.value.dim(0); }
  void init(Rng& rng) { w.init_uniform(rng); }
  void collect(const std::string& prefix, ParamList& out) {
    out.emplace_back(prefix + ".w", &w);
    out.emplace_back(prefix + ".b", &b);
  }
};

struct Embedding {
  Parameter table;  // rows x dim

  Embedding() = default;
  Embedding(std::size_t rows, std::size_t dim) : table(Shape{rows, dim}) {}

  std::size_t rows() const { return table.value.dim(0); }
  std::size_t dim() const { return table.value.dim(1); }
  void init(Rng& rng) { table.init_uniform(rng); }
  void collect(const std::string& prefix, ParamList& out) { out.emplace_back(prefix, &table); }
};

void zero_grads(const ParamList& params);

// Rounds every parameter value to the nearest 32-bit float, the precision of
// serialized weights.
void round_to_float(const ParamList& params);

}  // namespace biopipe

#endif  // BIOPIPE_CORE_PARAMS_HPP_
