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

#ifndef BIOPIPE_LEMMATIZER_HPP_
#define BIOPIPE_LEMMATIZER_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "biopipe/core/adam.hpp"
#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/vocab.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/random.hpp"

namespace biopipe {

struct LemmaLexicon {
  std::map<std::pair<std::string, std::string>, std::string> by_form_upos;
  std::map<std::string, std::string> by_form;

  // (form, upos) first, then form alone.
  std::optional<std::string> lookup(const std::string& form, const std::string& upos) const;
  bool empty() const { return by_form.empty(); }
  bool operator==(const LemmaLexicon&) const = default;
};

// Most frequent gold lemma per key; equal counts go to the smallest lemma.
LemmaLexicon build_lexicon(const Treebank& treebank);

enum class Shortcut : std::uint8_t { kSeq2Seq = 0, kLowercase = 1, kIdentity = 2 };

Shortcut shortcut_label(const std::string& form, const std::string& lemma);

struct LemmatizerConfig {
  std::size_t char_dim = 24;
  std::size_t upos_dim = 8;
  std::size_t encoder_dim = 48;  // per direction
  std::size_t decoder_dim = 64;
  std::size_t attention_dim = 32;
  std::size_t epochs = 30;
  AdamConfig adam{};
};

struct LemmaSeq2Seq {
  // Reserved scalars marking sequence start and end in the character vocabulary.
  static constexpr char32_t kBos = 0x02;
  static constexpr char32_t kEos = 0x03;

  LemmatizerConfig config;
  CharVocab chars;
  Vocab upos{true};
  Embedding char_embedding;
  Embedding upos_embedding;
  LstmParams enc_forward;
  LstmParams enc_backward;
  LstmParams decoder;      // input: char embedding + context
  Linear attn_memory;      // 2 * encoder -> attention
  Linear attn_query;       // decoder -> attention
  Parameter attn_vector;   // attention
  Linear output;           // decoder + 2 * encoder -> chars
  Linear shortcut;         // 2 * encoder -> 3

  LemmaSeq2Seq() = default;
  LemmaSeq2Seq(LemmatizerConfig cfg, CharVocab char_vocab, Vocab upos_vocab);

  void init(Rng& rng);
  ParamList parameters();
  // Decoding stops after this many characters without an end symbol.
  static std::size_t length_cap(std::size_t form_length) { return 2 * form_length + 5; }
};

// Copyable counter for instrumentation.
class CallCounter {
 public:
  CallCounter() = default;
  CallCounter(const CallCounter& other) : value_(other.value()) {}
  CallCounter& operator=(const CallCounter& other) {
    value_ = other.value();
    return *this;
  }
  void increment() const { value_.fetch_add(1, std::memory_order_relaxed); }
  std::size_t value() const { return value_.load(std::memory_order_relaxed); }
  void reset() { value_ = 0; }

 private:
  mutable std::atomic<std::size_t> value_{0};
};

struct Lemmatizer {
  LemmaLexicon lexicon;
  LemmaSeq2Seq seq2seq;
  // Counts lemmatize calls that reached the network.
  CallCounter network_calls;
};

// Teacher-forced character cross-entropy plus shortcut cross-entropy.
Var lemmatizer_loss(Graph& g, LemmaSeq2Seq& model, const std::string& form, const std::string& upos,
                    const std::string& lemma);

Shortcut predict_shortcut(const LemmaSeq2Seq& model, const std::string& form, const std::string& upos);

// Greedy decode; never longer than length_cap(form length).
std::string decode_lemma(const LemmaSeq2Seq& model, const std::string& form, const std::string& upos);

// Lexicon first, then the shortcut head routes to identity, lowercase or the
// decoder. Throws DomainError on an empty form. Never returns an empty string.
std::string lemmatize(const Lemmatizer& lemmatizer, const std::string& form, const std::string& upos);

void lemmatize_document(const Lemmatizer& lemmatizer, Document& doc);

// Throws DataError on an empty treebank or missing gold lemmas.
Lemmatizer train_lemmatizer(const Treebank& treebank, const LemmatizerConfig& config, std::uint64_t seed);

}  // namespace biopipe

#endif  // BIOPIPE_LEMMATIZER_HPP_
