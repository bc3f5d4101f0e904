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

#include "biopipe/core/layers.hpp"

#include <tuple>

namespace biopipe {

std::pair<Tensor, Tensor> lstm_step(const Tensor& x, const Tensor& h, const Tensor& c, const LstmParams& p) {
  Graph g;
  const Var state = g.lstm_cell(g.constant(x), g.constant(h), g.constant(c), unfrozen(p));
  const Tensor& s = g.value(state);
  const std::size_t hid = p.hidden_dim;
  std::vector<double> hv(s.ptr(), s.ptr() + hid), cv(s.ptr() + hid, s.ptr() + 2 * hid);
  return {Tensor::vector(std::move(hv)), Tensor::vector(std::move(cv))};
}

std::vector<Tensor> bilstm_encode(const std::vector<Tensor>& xs, const LstmParams& fwd, const LstmParams& bwd) {
  if (xs.empty()) return {};
  Graph g;
  std::vector<Var> in;
  in.reserve(xs.size());
  for (const Tensor& x : xs) in.push_back(g.constant(x));
  const std::vector<Var> out = run_bilstm(g, in, unfrozen(fwd), unfrozen(bwd));
  std::vector<Tensor> result;
  result.reserve(out.size());
  for (const Var v : out) result.push_back(g.value(v));
  return result;
}

Tensor biaffine_score(const Tensor& left, const Tensor& right, const BiaffineParams& p) {
  Graph g;
  return g.value(g.biaffine(g.constant(left), g.constant(right), unfrozen(p)));
}

std::vector<Var> run_lstm(Graph& g, std::span<const Var> xs, LstmParams& p, bool reverse) {
  const std::size_t n = xs.size();
  std::vector<Var> hs(n);
  if (n == 0) return hs;
  Var h = g.constant(Tensor(Shape{p.hidden_dim}));
  Var c = h;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = reverse ? n - 1 - k : k;
    const Var state = g.lstm_cell(xs[i], h, c, p);
    std::tie(h, c) = split_state(g, state, p.hidden_dim);
    hs[i] = h;
  }
  return hs;
}

std::vector<Var> run_bilstm(Graph& g, std::span<const Var> xs, LstmParams& fwd, LstmParams& bwd) {
  if (fwd.input_dim != bwd.input_dim) throw ShapeError("bilstm: direction input dims differ");
  const std::vector<Var> f = run_lstm(g, xs, fwd, false);
  const std::vector<Var> b = run_lstm(g, xs, bwd, true);
  std::vector<Var> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = g.concat({f[i], b[i]});
  return out;
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace biopipe
