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

#include "biopipe/ner.hpp"

#include <regex>
#include <set>

#include "biopipe/core/crf.hpp"
#include "biopipe/core/layers.hpp"
#include "biopipe/error.hpp"
#include "biopipe/unicode.hpp"

namespace biopipe {

Vocab bioes_inventory(const std::vector<std::string>& types) {
  std::set<std::string> sorted(types.begin(), types.end());
  Vocab v(false);
  v.add("O");
  for (const std::string& t : sorted) {
    for (const char* p : {"B-", "I-", "E-", "S-"}) v.add(p + t);
  }
  return v;
}

NerModel::NerModel(NerConfig cfg, NerMode m, Vocab word_vocab, Vocab tag_vocab, CharLm fwd_lm, CharLm bwd_lm,
                   CharVocab char_vocab)
    : config(cfg),
      mode(m),
      words(std::move(word_vocab)),
      tags(std::move(tag_vocab)),
      word_embedding(words.size(), cfg.word_dim),
      forward_lm(std::move(fwd_lm)),
      backward_lm(std::move(bwd_lm)),
      chars(std::move(char_vocab)) {
  if (mode == NerMode::kBaseline) {
    char_embedding = Embedding(chars.size(), cfg.char_dim);
    char_forward = LstmParams(cfg.char_dim, cfg.char_hidden_dim);
    char_backward = LstmParams(cfg.char_dim, cfg.char_hidden_dim);
  }
  forward = LstmParams(cfg.word_dim + context_dim(), cfg.hidden_dim);
  backward = LstmParams(cfg.word_dim + context_dim(), cfg.hidden_dim);
  emission = Linear(2 * cfg.hidden_dim, tags.size());
  crf = CrfParams(tags.size());
}

std::size_t NerModel::context_dim() const {
  if (mode == NerMode::kBaseline) return 2 * config.char_hidden_dim;
  return forward_lm.config.hidden_dim + backward_lm.config.hidden_dim;
}

void NerModel::init(Rng& rng) {
  word_embedding.init(rng);
  if (mode == NerMode::kBaseline) {
    char_embedding.init(rng);
    char_forward.init(rng);
    char_backward.init(rng);
  }
  forward.init(rng);
  backward.init(rng);
  emission.init(rng);
  crf.init(rng);
}

ParamList NerModel::parameters() {
  ParamList out;
  word_embedding.collect("word_embedding", out);
  if (mode == NerMode::kBaseline) {
    char_embedding.collect("char_embedding", out);
    char_forward.collect("char_forward", out);
    char_backward.collect("char_backward", out);
  }
  forward.collect("forward", out);
  backward.collect("backward", out);
  emission.collect("emission", out);
  crf.collect("crf", out);
  return out;
}

std::vector<std::string> NerModel::types() const {
  std::vector<std::string> out;
  for (const std::string& t : tags.items()) {
    if (t.rfind("B-", 0) == 0) out.push_back(t.substr(2));
  }
  return out;
}

std::vector<Tensor> ner_context(const NerModel& model, const std::vector<std::string>& tokens) {
  std::vector<Span> spans;
  const std::u32string text = join_tokens(tokens, &spans);
  return contextual_embed(model.forward_lm, model.backward_lm, text, spans);
}

Var ner_emissions(Graph& g, NerModel& model, const std::vector<std::string>& tokens,
                  const std::vector<Tensor>* context, Rng* dropout, const std::vector<std::size_t>* frequencies) {
  if (tokens.empty()) throw DomainError("ner_emissions: empty sentence");
  std::vector<Var> ctx;
  if (model.mode == NerMode::kBaseline) {
    std::vector<Span> spans;
    const std::u32string text = join_tokens(tokens, &spans);
    std::vector<Var> xs;
    for (const char32_t c : text) xs.push_back(g.lookup(model.char_embedding.table, model.chars.index(c)));
    const std::vector<Var> f = run_lstm(g, xs, model.char_forward, false);
    const std::vector<Var> b = run_lstm(g, xs, model.char_backward, true);
    for (const Span& s : spans) ctx.push_back(g.concat({f[forward_boundary(s, text.size())], b[backward_boundary(s)]}));
  } else {
    std::vector<Tensor> computed;
    if (!context) {
      computed = ner_context(model, tokens);
      context = &computed;
    }
    if (context->size() != tokens.size()) throw ShapeError("ner_emissions: one context vector per token required");
    for (const Tensor& t : *context) ctx.push_back(g.constant(t));
  }
  std::vector<Var> xs;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t id = model.words.index(tokens[i]);
    if (dropout && frequencies && id != 0) {
      if (dropout->bernoulli(model.config.word_dropout / (1.0 + static_cast<double>((*frequencies)[id])))) id = 0;
    }
    xs.push_back(g.concat({g.lookup(model.word_embedding.table, id), ctx[i]}));
  }
  const std::vector<Var> hs = run_bilstm(g, xs, model.forward, model.backward);
  std::vector<Var> rows;
  rows.reserve(hs.size());
  for (const Var h : hs) rows.push_back(g.affine(h, model.emission));
  return g.stack(rows);
}

Var ner_loss(Graph& g, NerModel& model, const TaggedSentence& sentence, const std::vector<Tensor>* context,
             Rng* dropout, const std::vector<std::size_t>* frequencies) {
  if (sentence.tokens.size() != sentence.tags.size()) throw DataError("ner_loss: tokens and tags differ in length");
  std::vector<std::size_t> gold;
  for (const std::string& t : sentence.tags) gold.push_back(model.tags.index(t));
  return g.crf_nll(ner_emissions(g, model, sentence.tokens, context, dropout, frequencies), model.crf, gold);
}

std::vector<TaggedSpan> recognize(const NerModel& model, const std::vector<std::string>& tokens) {
  if (tokens.empty()) return {};
  NerModel& m = unfrozen(model);
  Graph g;
  const Tensor& em = g.value(ner_emissions(g, m, tokens, nullptr));
  const ViterbiResult best = crf_viterbi(em, m.crf);
  std::vector<std::string> tags;
  for (const std::size_t k : best.path) tags.push_back(m.tags.item(k));
  std::vector<TaggedSpan> spans = decode_bioes(tags);
  for (TaggedSpan& s : spans) {
    for (std::size_t i = s.start; i < s.end; ++i) s.text += (i > s.start ? " " : "") + tokens[i];
  }
  return spans;
}

void recognize_document(const NerModel& model, Document& doc) {
  doc.entities.clear();
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const Sentence& s = doc.sentences[si];
    std::vector<std::string> tokens;
    for (const Word& w : s.words) tokens.push_back(w.form);
    for (const TaggedSpan& t : recognize(model, tokens)) {
      Entity e;
      e.type = t.type;
      e.sentence = si;
      e.start_token = t.start;
      e.end_token = t.end;
      const Word& first = s.words[t.start];
      const Word& last = s.words[t.end - 1];
      if (first.span && last.span) {
        e.span = Span{first.span->start, last.span->end};
        e.text = substr_scalars(doc.text, e.span);
      } else {
        e.text = t.text;
      }
      doc.entities.push_back(std::move(e));
    }
  }
}

NerModel train_ner(const std::vector<TaggedSentence>& corpus, const CharLm& fwd, const CharLm& bwd,
                   const NerConfig& config, std::uint64_t seed, NerMode mode) {
  if (corpus.empty()) throw DataError("train_ner: empty corpus");
  static const std::regex kTag(R"(O|[BIES]-\S+)");
  std::vector<std::string> types;
  Vocab words(true);
  CharVocab chars;
  std::vector<std::size_t> freq(1, 0);
  for (std::size_t si = 0; si < corpus.size(); ++si) {
    const TaggedSentence& s = corpus[si];
    if (s.tokens.size() != s.tags.size() || s.tokens.empty()) {
      throw DataError("train_ner: sentence " + std::to_string(si + 1) + " has mismatched or empty tokens/tags");
    }
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      if (!std::regex_match(s.tags[i], kTag)) {
        throw DataError("train_ner: sentence " + std::to_string(si + 1) + ": tag '" + s.tags[i] +
                        "' is not in the BIOES inventory");
      }
      if (s.tags[i] != "O") types.push_back(s.tags[i].substr(2));
      const std::size_t id = words.add(s.tokens[i]);
      if (id >= freq.size()) freq.resize(id + 1, 0);
      ++freq[id];
      if (mode == NerMode::kBaseline) {
        for (const char32_t c : utf8_decode(s.tokens[i])) chars.add(c);
      }
    }
  }
  if (mode == NerMode::kBaseline) chars.add(U' ');
  Rng rng(seed);
  NerModel model(config, mode, std::move(words), bioes_inventory(types),
                 mode == NerMode::kCharLm ? fwd : CharLm{}, mode == NerMode::kCharLm ? bwd : CharLm{},
                 std::move(chars));
  model.init(rng);
  std::vector<std::vector<Tensor>> contexts(corpus.size());
  if (mode == NerMode::kCharLm) {
    for (std::size_t i = 0; i < corpus.size(); ++i) contexts[i] = ner_context(model, corpus[i].tokens);
  }
  ParamList params = model.parameters();
  OptimizerState opt(config.adam);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t i : order) {
      zero_grads(params);
      Graph g;
      g.backward(ner_loss(g, model, corpus[i], mode == NerMode::kCharLm ? &contexts[i] : nullptr, &rng, &freq));
      adam_step(params, opt);
    }
  }
  round_to_float(params);
  return model;
}

}  // namespace biopipe
