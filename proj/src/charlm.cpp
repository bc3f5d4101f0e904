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

#include "biopipe/charlm.hpp"

#include <algorithm>
#include <cmath>

#include "biopipe/core/layers.hpp"
#include "biopipe/error.hpp"
#include "biopipe/unicode.hpp"

namespace biopipe {

const char* direction_name(Direction d) { return d == Direction::kForward ? "forward" : "backward"; }

std::vector<std::string> filter_corpus(const std::vector<std::string>& sentences) {
  std::vector<std::string> out;
  for (const std::string& s : sentences) {
    const std::size_t open = s.find("[**");
    if (open != std::string::npos && s.find("**]", open + 3) != std::string::npos) continue;
    out.push_back(s);
  }
  return out;
}

CharLm::CharLm(Direction dir, CharLmConfig cfg, CharVocab vocab)
    : direction(dir),
      config(cfg),
      chars(std::move(vocab)),
      embedding(chars.size(), cfg.char_dim),
      lstm(cfg.char_dim, cfg.hidden_dim),
      output(cfg.hidden_dim, chars.size()) {}

void CharLm::init(Rng& rng) {
  embedding.init(rng);
  lstm.init(rng);
  output.init(rng);
}

ParamList CharLm::parameters() {
  ParamList out;
  embedding.collect("embedding", out);
  lstm.collect("lstm", out);
  output.collect("output", out);
  return out;
}

Var charlm_loss(Graph& g, CharLm& model, std::u32string_view stream, Tensor& h, Tensor& c) {
  if (stream.size() < 2) throw DomainError("charlm_loss: need at least two characters");
  const std::size_t hid = model.config.hidden_dim;
  Var hv = g.constant(h);
  Var cv = g.constant(c);
  Var total{};
  for (std::size_t t = 0; t + 1 < stream.size(); ++t) {
    const Var x = g.lookup(model.embedding.table, model.chars.index(stream[t]));
    std::tie(hv, cv) = split_state(g, g.lstm_cell(x, hv, cv, model.lstm), hid);
    const Var loss = g.cross_entropy(g.affine(hv, model.output), model.chars.index(stream[t + 1]));
    total = t == 0 ? loss : g.add(total, loss);
  }
  h = g.value(hv);
  c = g.value(cv);
  return total;
}

std::vector<Tensor> charlm_states(const CharLm& model, const std::u32string& text) {
  const std::size_t n = text.size();
  std::vector<Tensor> states(n);
  Tensor h(Shape{model.config.hidden_dim});
  Tensor c(Shape{model.config.hidden_dim});
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = model.direction == Direction::kForward ? k : n - 1 - k;
    Tensor x(Shape{model.config.char_dim});
    std::copy_n(model.embedding.table.value.row(model.chars.index(text[i])), model.config.char_dim, x.ptr());
    std::tie(h, c) = lstm_step(x, h, c, model.lstm);
    states[i] = h;
  }
  return states;
}

CharLm train_charlm(const std::string& corpus, Direction direction, const CharLmConfig& config, std::uint64_t seed,
                    std::vector<double>* perplexity) {
  std::u32string stream = utf8_decode(corpus);
  if (stream.size() < 2) throw DataError("train_charlm: corpus is empty");
  if (direction == Direction::kBackward) std::reverse(stream.begin(), stream.end());
  CharVocab vocab;
  vocab.add(U'\n');
  for (const char32_t ch : stream) vocab.add(ch);
  Rng rng(seed);
  CharLm model(direction, config, std::move(vocab));
  model.init(rng);
  ParamList params = model.parameters();
  OptimizerState opt(config.adam);
  const std::size_t chunk = std::max<std::size_t>(config.chunk, 2);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Tensor h(Shape{config.hidden_dim});
    Tensor c(Shape{config.hidden_dim});
    double nll = 0;
    std::size_t predictions = 0;
    // Consecutive chunks overlap by one character so every transition is trained.
    for (std::size_t start = 0; start + 1 < stream.size(); start += chunk) {
      const std::size_t len = std::min(chunk + 1, stream.size() - start);
      zero_grads(params);
      Graph g;
      const Var loss = charlm_loss(g, model, std::u32string_view(stream).substr(start, len), h, c);
      nll += g.value(loss).item();
      predictions += len - 1;
      g.backward(loss);
      adam_step(params, opt);
    }
    if (perplexity) perplexity->push_back(std::exp(nll / static_cast<double>(predictions)));
  }
  round_to_float(params);
  return model;
}

std::u32string join_tokens(const std::vector<std::string>& tokens, std::vector<Span>* spans) {
  std::u32string text;
  if (spans) spans->clear();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) text += U' ';
    const std::u32string t = utf8_decode(tokens[i]);
    if (spans) spans->push_back(Span{text.size(), text.size() + t.size()});
    text += t;
  }
  return text;
}

std::size_t forward_boundary(const Span& token, std::size_t text_length) {
  return std::min(token.end, text_length - 1);
}

std::size_t backward_boundary(const Span& token) { return token.start == 0 ? 0 : token.start - 1; }

std::vector<Tensor> contextual_embed(const CharLm& fwd, const CharLm& bwd, const std::u32string& text,
                                     const std::vector<Span>& spans) {
  std::size_t last = 0;
  for (const Span& s : spans) {
    if (s.start >= s.end || s.end > text.size() || s.start < last) {
      throw DataError("contextual_embed: malformed token span");
    }
    last = s.end;
  }
  if (spans.empty()) return {};
  const std::vector<Tensor> f = charlm_states(fwd, text);
  const std::vector<Tensor> b = charlm_states(bwd, text);
  std::vector<Tensor> out;
  out.reserve(spans.size());
  for (const Span& s : spans) {
    const Tensor& fs = f[forward_boundary(s, text.size())];
    const Tensor& bs = b[backward_boundary(s)];
    Tensor v(Shape{fs.size() + bs.size()});
    std::copy(fs.ptr(), fs.ptr() + fs.size(), v.ptr());
    std::copy(bs.ptr(), bs.ptr() + bs.size(), v.ptr() + fs.size());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace biopipe
