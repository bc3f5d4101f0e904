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

#ifndef BIOPIPE_CORE_GRAPH_HPP_
#define BIOPIPE_CORE_GRAPH_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "biopipe/core/params.hpp"
#include "biopipe/core/tensor.hpp"

namespace biopipe {

// Handle to a value recorded on a Graph.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Dynamic tape for reverse-mode differentiation. Every op appends one node;
// backward() replays the tape in reverse. Parameter gradients accumulate
// straight into Parameter::grad, so callers zero them between steps.
//
// A Graph is single-use and not thread-safe. Parameters referenced by a live
// graph must outlive it.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  // Leaves.
  Var constant(Tensor value);
  Var param(Parameter& p);
  Var lookup(Parameter& table, std::size_t row);

  const Tensor& value(Var v) const;
  std::size_t size() const { return nodes_.size(); }

  // Elementwise, identical shapes.
  Var add(Var a, Var b);
  Var mul(Var a, Var b);
  Var sigmoid(Var a);
  Var tanh(Var a);

  // Vectors.
  Var concat(std::span<const Var> parts);
  Var concat(std::initializer_list<Var> parts) {
    return concat(std::span<const Var>(parts.begin(), parts.size()));
  }
  Var slice(Var a, std::size_t offset, std::size_t length);
  Var softmax(Var a);
  Var sum(Var a);

  // Matrices.
  Var stack(std::span<const Var> rows);
  Var row(Var m, std::size_t i);
  Var matvec(Var m, Var x);
  Var weighted_rows(Var m, Var weights);  // m' * weights
  Var add_row(Var m, Var v);              // v added to every row of m

  // Layers with fused backward passes.
  Var affine(Var x, Linear& layer);
  Var affine_rows(Var x, Linear& layer);
  // Returns [h'; c'] of length 2 * hidden.
  Var lstm_cell(Var x, Var h, Var c, LstmParams& p);
  Var biaffine(Var left, Var right, BiaffineParams& p);
  // All-pairs scores for an out_dim 1 scorer: result.at(h, d) scores
  // heads[h] as left against deps[d] as right.
  Var biaffine_pairs(Var heads, Var deps, BiaffineParams& p);

  // Losses (scalars).
  Var cross_entropy(Var logits, std::size_t target);
  // Sum over dependents d >= 1 of the negative log softmax, taken over
  // heads h != d, of scores.at(h, d) at gold_heads[d].
  Var head_cross_entropy(Var scores, std::span<const std::size_t> gold_heads);
  // Negative log-likelihood of gold under a linear-chain CRF.
  Var crf_nll(Var emissions, CrfParams& p, std::span<const std::size_t> gold);

  // Populates gradients of everything reachable from loss. loss must hold a
  // single element.
  void backward(Var loss);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    const Tensor* ext_value = nullptr;
    Tensor* ext_grad = nullptr;
    bool requires_grad = false;
    std::function<void()> back;
  };

  Var push(Tensor value, bool requires_grad, std::function<void()> back = {});
  const Tensor& val(int id) const;
  Tensor& grad(int id);
  bool needs(int id) const { return nodes_[id].requires_grad; }
  bool needs(Var v) const { return nodes_[v.id].requires_grad; }

  std::vector<Node> nodes_;
  std::vector<std::pair<const Parameter*, int>> param_nodes_;
};

// Convenience: the two halves of an lstm_cell output.
std::pair<Var, Var> split_state(Graph& g, Var state, std::size_t hidden);

}  // namespace biopipe

#endif  // BIOPIPE_CORE_GRAPH_HPP_
