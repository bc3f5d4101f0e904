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

#ifndef BIOPIPE_PARSER_HPP_
#define BIOPIPE_PARSER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "biopipe/core/adam.hpp"
#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/vocab.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/random.hpp"

namespace biopipe {

// Maximum spanning arborescence over an (n+1) x (n+1) score matrix where
// scores.at(h, d) scores head h for dependent d and node 0 is the root.
// Exactly one word attaches to the root. Returns heads[d-1] for d = 1..n.
// Throws DomainError when n = 0 or no finite tree exists.
std::vector<int> mst_decode(const Tensor& scores);

// Sum of scores.at(heads[d-1], d).
double tree_score(const Tensor& scores, const std::vector<int>& heads);

struct ParserConfig {
  std::size_t word_dim = 32;
  std::size_t tag_dim = 16;
  std::size_t hidden_dim = 64;
  std::size_t arc_dim = 48;
  std::size_t rel_dim = 32;
  std::size_t epochs = 30;
  double word_dropout = 0.5;
  AdamConfig adam{};
};

struct ParserModel {
  ParserConfig config;
  Vocab words{true};
  Vocab upos{true};
  Vocab xpos{true};
  Vocab deprels{false};
  Embedding word_embedding;
  Embedding upos_embedding;
  Embedding xpos_embedding;
  Parameter root_input;  // stands in for the artificial root token
  LstmParams forward;
  LstmParams backward;
  Linear arc_head;
  Linear arc_dep;
  Linear rel_head;
  Linear rel_dep;
  BiaffineParams arc_scorer;  // out_dim 1
  BiaffineParams rel_scorer;  // out_dim = deprels.size()

  ParserModel() = default;
  ParserModel(ParserConfig cfg, Vocab word_vocab, Vocab upos_vocab, Vocab xpos_vocab, Vocab deprel_vocab);

  std::size_t input_dim() const { return config.word_dim + 2 * config.tag_dim; }
  void init(Rng& rng);
  ParamList parameters();
};

struct ArcScores {
  Tensor arcs;                    // (n+1) x (n+1), masked entries -inf
  std::vector<Tensor> relations;  // relations[h * (n+1) + d], length deprels.size()
};

// Throws ShapeError when the sequences differ in length, DomainError when empty.
ArcScores score_arcs(const ParserModel& model, const std::vector<std::string>& words,
                     const std::vector<std::string>& upos, const std::vector<std::string>& xpos);

struct DependencyTree {
  std::vector<int> heads;
  std::vector<std::string> deprels;
  bool operator==(const DependencyTree&) const = default;
};

DependencyTree parse_sentence(const ParserModel& model, const std::vector<std::string>& words,
                              const std::vector<std::string>& upos, const std::vector<std::string>& xpos);

// Fills head and deprel of every word from its form, upos and xpos.
void parse_document(const ParserModel& model, Document& doc);

// Arc cross-entropy over candidate heads plus relation cross-entropy at the
// gold arcs.
Var parser_loss(Graph& g, ParserModel& model, const Sentence& sentence, Rng* dropout = nullptr,
                const std::vector<std::size_t>* frequencies = nullptr);

// Throws DataError when a gold sentence is not a single-root tree.
ParserModel train_parser(const Treebank& treebank, const ParserConfig& config, std::uint64_t seed);

}  // namespace biopipe

#endif  // BIOPIPE_PARSER_HPP_
