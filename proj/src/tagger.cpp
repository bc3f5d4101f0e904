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

#include "biopipe/tagger.hpp"

#include <sstream>

#include "biopipe/core/layers.hpp"
#include "biopipe/error.hpp"

namespace biopipe {

WordVectors read_word_vectors(std::string_view bytes) {
  WordVectors out;
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(bytes)};
  std::string line;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(static_cast<float>(v));
    if (!fields.eof()) throw DataError("word vectors line " + std::to_string(line_no) + ": non-numeric value");
    if (line_no == 1 && values.size() == 1 && token.find_first_not_of("0123456789") == std::string::npos) continue;
    if (values.empty()) throw DataError("word vectors line " + std::to_string(line_no) + ": no values");
    if (dim == 0) dim = values.size();
    if (values.size() != dim) {
      throw DataError("word vectors line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                      " values, got " + std::to_string(values.size()));
    }
    if (out.words.find(token)) continue;
    out.words.add(token);
    rows.push_back(std::move(values));
  }
  if (dim == 0) throw DataError("word vectors: no entries");
  out.table = Tensor(Shape{out.words.size(), dim});
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), out.table.row(r + 1));
  return out;
}

TaggerModel::TaggerModel(TaggerConfig cfg, Vocab word_vocab, Vocab upos_vocab, Vocab xpos_vocab,
                         std::optional<WordVectors> external)
    : config(cfg),
      words(std::move(word_vocab)),
      upos(std::move(upos_vocab)),
      xpos(std::move(xpos_vocab)),
      vectors(std::move(external)),
      word_embedding(words.size(), cfg.word_dim),
      forward(cfg.word_dim + (vectors ? vectors->dim() : 0), cfg.hidden_dim),
      backward(cfg.word_dim + (vectors ? vectors->dim() : 0), cfg.hidden_dim),
      upos_head(2 * cfg.hidden_dim, upos.size()),
      upos_embedding(upos.size(), cfg.upos_dim),
      xpos_scorer(2 * cfg.hidden_dim, cfg.upos_dim, xpos.size()) {}

void TaggerModel::init(Rng& rng) {
  word_embedding.init(rng);
  forward.init(rng);
  backward.init(rng);
  upos_head.init(rng);
  upos_embedding.init(rng);
  xpos_scorer.init(rng);
}

ParamList TaggerModel::parameters() {
  ParamList out;
  word_embedding.collect("word_embedding", out);
  forward.collect("forward", out);
  backward.collect("backward", out);
  upos_head.collect("upos_head", out);
  upos_embedding.collect("upos_embedding", out);
  xpos_scorer.collect("xpos_scorer", out);
  return out;
}

namespace {

std::vector<Var> encode(Graph& g, TaggerModel& model, const std::vector<std::string>& forms,
                        const std::vector<std::size_t>& ids) {
  std::vector<Var> xs;
  xs.reserve(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    Var x = g.lookup(model.word_embedding.table, ids[i]);
    if (model.vectors) {
      const std::size_t row = model.vectors->words.index(forms[i]);
      const std::size_t d = model.vectors->dim();
      Tensor v(Shape{d});
      std::copy(model.vectors->table.row(row), model.vectors->table.row(row) + d, v.ptr());
      x = g.concat({x, g.constant(std::move(v))});
    }
    xs.push_back(x);
  }
  return run_bilstm(g, xs, model.forward, model.backward);
}

std::vector<std::string> forms_of(const Sentence& s) {
  std::vector<std::string> forms;
  for (const Word& w : s.words) forms.push_back(w.form);
  return forms;
}

}  // namespace

Var tagger_loss(Graph& g, TaggerModel& model, const Sentence& sentence, Rng* dropout,
                const std::vector<std::size_t>* frequencies) {
  if (sentence.words.empty()) throw DomainError("tagger_loss: empty sentence");
  const auto forms = forms_of(sentence);
  std::vector<std::size_t> ids;
  for (const std::string& f : forms) {
    std::size_t id = model.words.index(f);
    if (dropout && frequencies && id != 0) {
      const double p = model.config.word_dropout / (1.0 + static_cast<double>((*frequencies)[id]));
      if (dropout->bernoulli(p)) id = 0;
    }
    ids.push_back(id);
  }
  const std::vector<Var> hs = encode(g, model, forms, ids);
  Var total{};
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::size_t gold_upos = model.upos.index(sentence.words[i].upos);
    const std::size_t gold_xpos = model.xpos.index(sentence.words[i].xpos);
    const Var lu = g.cross_entropy(g.affine(hs[i], model.upos_head), gold_upos);
    const Var xl = g.biaffine(hs[i], g.lookup(model.upos_embedding.table, gold_upos), model.xpos_scorer);
    const Var term = g.add(lu, g.cross_entropy(xl, gold_xpos));
    total = i == 0 ? term : g.add(total, term);
  }
  return total;
}

std::vector<TagPair> tag_sentence(const TaggerModel& model, const std::vector<std::string>& words) {
  if (words.empty()) throw DomainError("tag_sentence: empty sentence");
  TaggerModel& m = unfrozen(model);
  std::vector<std::size_t> ids;
  for (const std::string& f : words) ids.push_back(m.words.index(f));
  Graph g;
  const std::vector<Var> hs = encode(g, m, words, ids);
  std::vector<TagPair> out;
  out.reserve(hs.size());
  for (const Var h : hs) {
    const std::size_t u = argmax(g.value(g.affine(h, m.upos_head)).data());
    const Var xl = g.biaffine(h, g.lookup(m.upos_embedding.table, u), m.xpos_scorer);
    out.push_back({m.upos.item(u), m.xpos.item(argmax(g.value(xl).data()))});
  }
  return out;
}

void tag_document(const TaggerModel& model, Document& doc) {
  for (Sentence& s : doc.sentences) {
    if (s.words.empty()) continue;
    const auto tags = tag_sentence(model, forms_of(s));
    for (std::size_t i = 0; i < tags.size(); ++i) {
      s.words[i].upos = tags[i].upos;
      s.words[i].xpos = tags[i].xpos;
    }
  }
}

TaggerModel train_tagger(const Treebank& treebank, const TaggerConfig& config, std::uint64_t seed,
                         std::optional<WordVectors> vectors) {
  if (treebank.sentences.empty()) throw DataError("train_tagger: empty treebank");
  Vocab words(true);
  Vocab upos(false);
  Vocab xpos(false);
  std::vector<std::size_t> freq(1, 0);
  for (const Sentence& s : treebank.sentences) {
    for (const Word& w : s.words) {
      if (w.upos == "_" || w.upos.empty()) {
        throw DataError("train_tagger: word '" + w.form + "' has no UPOS; the treebank needs gold UPOS in column 4");
      }
      if (w.xpos == "_" || w.xpos.empty()) {
        throw DataError("train_tagger: word '" + w.form + "' has no XPOS; the treebank needs gold XPOS in column 5");
      }
      const std::size_t id = words.add(w.form);
      if (id >= freq.size()) freq.resize(id + 1, 0);
      ++freq[id];
      upos.add(w.upos);
      xpos.add(w.xpos);
    }
  }
  Rng rng(seed);
  TaggerModel model(config, std::move(words), std::move(upos), std::move(xpos), std::move(vectors));
  model.init(rng);
  ParamList params = model.parameters();
  OptimizerState opt(config.adam);
  std::vector<std::size_t> order(treebank.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t i : order) {
      const Sentence& s = treebank.sentences[i];
      if (s.words.empty()) continue;
      zero_grads(params);
      Graph g;
      g.backward(tagger_loss(g, model, s, &rng, &freq));
      adam_step(params, opt);
    }
  }
  round_to_float(params);
  return model;
}

}  // namespace biopipe
