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

#ifndef BIOPIPE_TAGGER_HPP_
#define BIOPIPE_TAGGER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biopipe/core/adam.hpp"
#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/vocab.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/random.hpp"

namespace biopipe {

// Frozen external word vectors. Row 0 is the all-zero unknown vector.
struct WordVectors {
  Vocab words;
  Tensor table;  // words.size() x dim

  std::size_t dim() const { return table.shape().rank() == 2 ? table.shape()[1] : 0; }
};

// Text format: one token followed by its floats per line, whitespace separated.
// An optional leading "<count> <dim>" header line is skipped.
WordVectors read_word_vectors(std::string_view bytes);

struct TaggerConfig {
  std::size_t word_dim = 32;
  std::size_t upos_dim = 16;
  std::size_t hidden_dim = 48;
  std::size_t epochs = 25;
  // Training replaces a word by UNK with probability word_dropout / (1 + freq).
  double word_dropout = 0.5;
  AdamConfig adam{};
};

struct TaggerModel {
  TaggerConfig config;
  Vocab words{true};
  Vocab upos{false};
  Vocab xpos{false};
  std::optional<WordVectors> vectors;
  Embedding word_embedding;
  LstmParams forward;
  LstmParams backward;
  Linear upos_head;
  Embedding upos_embedding;
  BiaffineParams xpos_scorer;  // (hidden, upos embedding) -> xpos logits

  TaggerModel() = default;
  TaggerModel(TaggerConfig cfg, Vocab word_vocab, Vocab upos_vocab, Vocab xpos_vocab,
              std::optional<WordVectors> external = std::nullopt);

  void init(Rng& rng);
  ParamList parameters();
};

struct TagPair {
  std::string upos;
  std::string xpos;
  bool operator==(const TagPair&) const = default;
};

// Sum of UPOS and XPOS cross-entropies for one sentence, XPOS conditioned on
// the gold UPOS. With rng set, word dropout is applied using frequencies.
Var tagger_loss(Graph& g, TaggerModel& model, const Sentence& sentence, Rng* dropout = nullptr,
                const std::vector<std::size_t>* frequencies = nullptr);

// Throws DomainError on an empty sentence.
std::vector<TagPair> tag_sentence(const TaggerModel& model, const std::vector<std::string>& words);

// Fills upos and xpos of every word in place.
void tag_document(const TaggerModel& model, Document& doc);

// Throws DataError when UPOS or XPOS is missing anywhere.
TaggerModel train_tagger(const Treebank& treebank, const TaggerConfig& config, std::uint64_t seed,
                         std::optional<WordVectors> vectors = std::nullopt);

}  // namespace biopipe

#endif  // BIOPIPE_TAGGER_HPP_
