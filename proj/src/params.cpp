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

#include "biopipe/core/params.hpp"

namespace biopipe {

LstmParams::LstmParams(std::size_t input, std::size_t hidden)
    : input_dim(input),
      hidden_dim(hidden),
      w_input(Shape{hidden, input + hidden}),
      w_forget(Shape{hidden, input + hidden}),
      w_output(Shape{hidden, input + hidden}),
      w_cell(Shape{hidden, input + hidden}),
      b_input(Shape{hidden}),
      b_forget(Shape{hidden}),
      b_output(Shape{hidden}),
      b_cell(Shape{hidden}) {}

void LstmParams::init(Rng& rng) {
  for (Parameter* w : {&w_input, &w_forget, &w_output, &w_cell}) w->init_uniform(rng);
}

void LstmParams::collect(const std::string& prefix, ParamList& out) {
  out.emplace_back(prefix + ".w_input", &w_input);
  out.emplace_back(prefix + ".w_forget", &w_forget);
  out.emplace_back(prefix + ".w_output", &w_output);
  out.emplace_back(prefix + ".w_cell", &w_cell);
  out.emplace_back(prefix + ".b_input", &b_input);
  out.emplace_back(prefix + ".b_forget", &b_forget);
  out.emplace_back(prefix + ".b_output", &b_output);
  out.emplace_back(prefix + ".b_cell", &b_cell);
}

BiaffineParams::BiaffineParams(std::size_t left, std::size_t right, std::size_t out)
    : left_dim(left),
      right_dim(right),
      out_dim(out),
      u(Shape{left, right, out}),
      w(Shape{out, left + right}),
      b(Shape{out}) {}

void BiaffineParams::init(Rng& rng) {
  u.init_uniform(rng);
  w.init_uniform(rng);
}

void BiaffineParams::collect(const std::string& prefix, ParamList& out) {
  out.emplace_back(prefix + ".u", &u);
  out.emplace_back(prefix + ".w", &w);
  out.emplace_back(prefix + ".b", &b);
}

CrfParams::CrfParams(std::size_t labels)
    : num_labels(labels), transitions(Shape{labels, labels}), start(Shape{labels}), stop(Shape{labels}) {
  if (labels == 0) throw DomainError("crf needs at least one label");
}

void CrfParams::init(Rng& rng) { transitions.init_uniform(rng); }

void CrfParams::collect(const std::string& prefix, ParamList& out) {
  out.emplace_back(prefix + ".transitions", &transitions);
  out.emplace_back(prefix + ".start", &start);
  out.emplace_back(prefix + ".stop", &stop);
}

void zero_grads(const ParamList& params) {
  for (const auto& [name, p] : params) {
    if (p->grad.size() != p->value.size()) p->grad = Tensor(p->value.shape());
    p->zero_grad();
  }
}

void round_to_float(const ParamList& params) {
  for (const auto& [name, p] : params) {
    for (double& v : p->value.data()) v = static_cast<double>(static_cast<float>(v));
  }
}

}  // namespace biopipe
