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

#include "biopipe/lemmatizer.hpp"

#include <set>
#include <tuple>

#include "biopipe/core/layers.hpp"
#include "biopipe/error.hpp"
#include "biopipe/unicode.hpp"

namespace biopipe {

std::optional<std::string> LemmaLexicon::lookup(const std::string& form, const std::string& upos) const {
  if (const auto it = by_form_upos.find({form, upos}); it != by_form_upos.end()) return it->second;
  if (const auto it = by_form.find(form); it != by_form.end()) return it->second;
  return std::nullopt;
}

namespace {

template <typename Key>
std::map<Key, std::string> most_frequent(const std::map<Key, std::map<std::string, std::size_t>>& counts) {
  std::map<Key, std::string> out;
  for (const auto& [key, lemmas] : counts) {
    std::size_t best = 0;
    for (const auto& [lemma, n] : lemmas) {
      // Iteration is in lemma order, so strict > keeps the smallest on ties.
      if (n > best) {
        best = n;
        out[key] = lemma;
      }
    }
  }
  return out;
}

bool has_lemma(const Word& w) { return !w.lemma.empty() && !(w.lemma == "_" && w.form != "_"); }

}  // namespace

LemmaLexicon build_lexicon(const Treebank& treebank) {
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::size_t>> pair_counts;
  std::map<std::string, std::map<std::string, std::size_t>> form_counts;
  for (const Sentence& s : treebank.sentences) {
    for (const Word& w : s.words) {
      if (!has_lemma(w)) continue;
      ++pair_counts[{w.form, w.upos}][w.lemma];
      ++form_counts[w.form][w.lemma];
    }
  }
  LemmaLexicon lex;
  lex.by_form_upos = most_frequent(pair_counts);
  lex.by_form = most_frequent(form_counts);
  return lex;
}

Shortcut shortcut_label(const std::string& form, const std::string& lemma) {
  if (lemma == form) return Shortcut::kIdentity;
  if (lemma == to_lower_utf8(form)) return Shortcut::kLowercase;
  return Shortcut::kSeq2Seq;
}

LemmaSeq2Seq::LemmaSeq2Seq(LemmatizerConfig cfg, CharVocab char_vocab, Vocab upos_vocab)
    : config(cfg), chars(std::move(char_vocab)), upos(std::move(upos_vocab)) {
  chars.add(kBos);
  chars.add(kEos);
  char_embedding = Embedding(chars.size(), cfg.char_dim);
  upos_embedding = Embedding(upos.size(), cfg.upos_dim);
  enc_forward = LstmParams(cfg.char_dim + cfg.upos_dim, cfg.encoder_dim);
  enc_backward = LstmParams(cfg.char_dim + cfg.upos_dim, cfg.encoder_dim);
  decoder = LstmParams(cfg.char_dim + 2 * cfg.encoder_dim, cfg.decoder_dim);
  attn_memory = Linear(2 * cfg.encoder_dim, cfg.attention_dim);
  attn_query = Linear(cfg.decoder_dim, cfg.attention_dim);
  attn_vector = Parameter(Shape{cfg.attention_dim});
  output = Linear(cfg.decoder_dim + 2 * cfg.encoder_dim, chars.size());
  shortcut = Linear(2 * cfg.encoder_dim, 3);
}

void LemmaSeq2Seq::init(Rng& rng) {
  char_embedding.init(rng);
  upos_embedding.init(rng);
  enc_forward.init(rng);
  enc_backward.init(rng);
  decoder.init(rng);
  attn_memory.init(rng);
  attn_query.init(rng);
  attn_vector.init_uniform(rng);
  output.init(rng);
  shortcut.init(rng);
}

ParamList LemmaSeq2Seq::parameters() {
  ParamList out;
  char_embedding.collect("char_embedding", out);
  upos_embedding.collect("upos_embedding", out);
  enc_forward.collect("enc_forward", out);
  enc_backward.collect("enc_backward", out);
  decoder.collect("decoder", out);
  attn_memory.collect("attn_memory", out);
  attn_query.collect("attn_query", out);
  out.emplace_back("attn_vector", &attn_vector);
  output.collect("output", out);
  shortcut.collect("shortcut", out);
  return out;
}

namespace {

struct Encoding {
  Var memory;       // len x 2E
  Var projected;    // len x A
  Var summary;      // 2E
};

Encoding encode(Graph& g, LemmaSeq2Seq& m, const std::u32string& form, const std::string& upos) {
  const Var tag = g.lookup(m.upos_embedding.table, m.upos.index(upos));
  std::vector<Var> xs;
  for (const char32_t c : form) xs.push_back(g.concat({g.lookup(m.char_embedding.table, m.chars.index(c)), tag}));
  const std::vector<Var> hs = run_bilstm(g, xs, m.enc_forward, m.enc_backward);
  const std::size_t e = m.config.encoder_dim;
  Encoding enc;
  enc.memory = g.stack(hs);
  enc.projected = g.affine_rows(enc.memory, m.attn_memory);
  enc.summary = g.concat({g.slice(hs.back(), 0, e), g.slice(hs.front(), e, e)});
  return enc;
}

struct DecoderState {
  Var h, c, context;
};

DecoderState start_state(Graph& g, const LemmaSeq2Seq& m) {
  return {g.constant(Tensor(Shape{m.config.decoder_dim})), g.constant(Tensor(Shape{m.config.decoder_dim})),
          g.constant(Tensor(Shape{2 * m.config.encoder_dim}))};
}

// Feeds one character and returns output logits.
Var decoder_step(Graph& g, LemmaSeq2Seq& m, const Encoding& enc, DecoderState& st, std::size_t prev) {
  const Var x = g.concat({g.lookup(m.char_embedding.table, prev), st.context});
  const auto [h, c] = split_state(g, g.lstm_cell(x, st.h, st.c, m.decoder), m.config.decoder_dim);
  const Var energy = g.tanh(g.add_row(enc.projected, g.affine(h, m.attn_query)));
  const Var weights = g.softmax(g.matvec(energy, g.param(m.attn_vector)));
  st.h = h;
  st.c = c;
  st.context = g.weighted_rows(enc.memory, weights);
  return g.affine(g.concat({h, st.context}), m.output);
}

std::u32string checked_form(const std::string& form) {
  std::u32string chars = utf8_decode(form);
  if (chars.empty()) throw DomainError("lemmatizer: empty form");
  return chars;
}

}  // namespace

Var lemmatizer_loss(Graph& g, LemmaSeq2Seq& model, const std::string& form, const std::string& upos,
                    const std::string& lemma) {
  const std::u32string chars = checked_form(form);
  const Encoding enc = encode(g, model, chars, upos);
  Var total = g.cross_entropy(g.affine(enc.summary, model.shortcut),
                              static_cast<std::size_t>(shortcut_label(form, lemma)));
  DecoderState st = start_state(g, model);
  std::size_t prev = model.chars.index(LemmaSeq2Seq::kBos);
  std::u32string target = utf8_decode(lemma);
  target.push_back(LemmaSeq2Seq::kEos);
  for (const char32_t c : target) {
    const std::size_t gold = model.chars.index(c);
    total = g.add(total, g.cross_entropy(decoder_step(g, model, enc, st, prev), gold));
    prev = gold;
  }
  return total;
}

Shortcut predict_shortcut(const LemmaSeq2Seq& model, const std::string& form, const std::string& upos) {
  LemmaSeq2Seq& m = unfrozen(model);
  Graph g;
  const Encoding enc = encode(g, m, checked_form(form), upos);
  return static_cast<Shortcut>(argmax(g.value(g.affine(enc.summary, m.shortcut)).data()));
}

std::string decode_lemma(const LemmaSeq2Seq& model, const std::string& form, const std::string& upos) {
  LemmaSeq2Seq& m = unfrozen(model);
  const std::u32string chars = checked_form(form);
  Graph g;
  const Encoding enc = encode(g, m, chars, upos);
  DecoderState st = start_state(g, m);
  std::size_t prev = m.chars.index(LemmaSeq2Seq::kBos);
  const std::size_t eos = m.chars.index(LemmaSeq2Seq::kEos);
  std::u32string out;
  for (std::size_t step = 0; step < LemmaSeq2Seq::length_cap(chars.size()); ++step) {
    const std::size_t next = argmax(g.value(decoder_step(g, m, enc, st, prev)).data());
    if (next == eos) break;
    if (next != CharVocab::kUnk && next != m.chars.index(LemmaSeq2Seq::kBos)) out.push_back(m.chars.item(next));
    prev = next;
  }
  return utf8_encode(out);
}

std::string lemmatize(const Lemmatizer& lemmatizer, const std::string& form, const std::string& upos) {
  if (form.empty()) throw DomainError("lemmatize: empty form");
  if (auto hit = lemmatizer.lexicon.lookup(form, upos)) {
    if (!hit->empty()) return *hit;
  }
  lemmatizer.network_calls.increment();
  switch (predict_shortcut(lemmatizer.seq2seq, form, upos)) {
    case Shortcut::kIdentity:
      return form;
    case Shortcut::kLowercase:
      return to_lower_utf8(form);
    case Shortcut::kSeq2Seq:
      break;
  }
  std::string lemma = decode_lemma(lemmatizer.seq2seq, form, upos);
  return lemma.empty() ? form : lemma;
}

void lemmatize_document(const Lemmatizer& lemmatizer, Document& doc) {
  for (Sentence& s : doc.sentences) {
    for (Word& w : s.words) w.lemma = lemmatize(lemmatizer, w.form, w.upos);
  }
}

Lemmatizer train_lemmatizer(const Treebank& treebank, const LemmatizerConfig& config, std::uint64_t seed) {
  if (treebank.num_words() == 0) throw DataError("train_lemmatizer: empty treebank");
  std::set<std::tuple<std::string, std::string, std::string>> triples;
  CharVocab chars;
  Vocab upos(true);
  for (const Sentence& s : treebank.sentences) {
    for (const Word& w : s.words) {
      if (!has_lemma(w)) throw DataError("train_lemmatizer: word '" + w.form + "' has no gold lemma");
      triples.emplace(w.form, w.upos, w.lemma);
      for (const char32_t c : utf8_decode(w.form)) chars.add(c);
      for (const char32_t c : utf8_decode(w.lemma)) chars.add(c);
      upos.add(w.upos);
    }
  }
  Lemmatizer out;
  out.lexicon = build_lexicon(treebank);
  Rng rng(seed);
  out.seq2seq = LemmaSeq2Seq(config, std::move(chars), std::move(upos));
  LemmaSeq2Seq& model = out.seq2seq;
  model.init(rng);
  ParamList params = model.parameters();
  OptimizerState opt(config.adam);
  std::vector<std::tuple<std::string, std::string, std::string>> data(triples.begin(), triples.end());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(data);
    for (const auto& [form, tag, lemma] : data) {
      zero_grads(params);
      Graph g;
      g.backward(lemmatizer_loss(g, model, form, tag, lemma));
      adam_step(params, opt);
    }
  }
  round_to_float(params);
  return out;
}

}  // namespace biopipe
