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

#ifndef BIOPIPE_NER_HPP_
#define BIOPIPE_NER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biopipe/bioes.hpp"
#include "biopipe/charlm.hpp"
#include "biopipe/core/adam.hpp"
#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/vocab.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/document.hpp"

namespace biopipe {

// kCharLm uses frozen pretrained language models; kBaseline swaps them for a
// randomly initialized character BiLSTM trained jointly.
enum class NerMode : std::uint8_t { kCharLm = 0, kBaseline = 1 };

struct NerConfig {
  std::size_t word_dim = 32;
  std::size_t hidden_dim = 48;
  // Character BiLSTM sizes for the baseline mode.
  std::size_t char_dim = 16;
  std::size_t char_hidden_dim = 32;
  std::size_t epochs = 25;
  double word_dropout = 0.5;
  AdamConfig adam{};
};

// O followed by B, I, E, S for each type in sorted order.
Vocab bioes_inventory(const std::vector<std::string>& types);

struct NerModel {
  NerConfig config;
  NerMode mode = NerMode::kCharLm;
  Vocab words{true};
  Vocab tags{false};
  Embedding word_embedding;
  // kCharLm only; never updated by NER training.
  CharLm forward_lm;
  CharLm backward_lm;
  // kBaseline only.
  CharVocab chars;
  Embedding char_embedding;
  LstmParams char_forward;
  LstmParams char_backward;
  LstmParams forward;
  LstmParams backward;
  Linear emission;
  CrfParams crf;

  NerModel() = default;
  NerModel(NerConfig cfg, NerMode m, Vocab word_vocab, Vocab tag_vocab, CharLm fwd_lm, CharLm bwd_lm,
           CharVocab char_vocab);

  std::size_t context_dim() const;
  void init(Rng& rng);
  // Trainable parameters only; the language models are excluded.
  ParamList parameters();
  std::vector<std::string> types() const;
};

// Emission scores (length x tags) for a sentence; context holds precomputed
// CharLM vectors in kCharLm mode and may be null in kBaseline mode.
Var ner_emissions(Graph& g, NerModel& model, const std::vector<std::string>& tokens,
                  const std::vector<Tensor>* context, Rng* dropout = nullptr,
                  const std::vector<std::size_t>* frequencies = nullptr);

// CRF negative log-likelihood of gold BIOES tags.
Var ner_loss(Graph& g, NerModel& model, const TaggedSentence& sentence, const std::vector<Tensor>* context = nullptr,
             Rng* dropout = nullptr, const std::vector<std::size_t>* frequencies = nullptr);

// Frozen CharLM features for a pre-tokenized sentence (tokens joined by spaces).
std::vector<Tensor> ner_context(const NerModel& model, const std::vector<std::string>& tokens);

// Empty sentence gives no entities.
std::vector<TaggedSpan> recognize(const NerModel& model, const std::vector<std::string>& tokens);

// Replaces doc.entities with recognized mentions carrying character spans.
void recognize_document(const NerModel& model, Document& doc);

// Throws DataError on an empty corpus or an invalid tag. In kBaseline mode the
// language models are ignored.
NerModel train_ner(const std::vector<TaggedSentence>& corpus, const CharLm& fwd, const CharLm& bwd,
                   const NerConfig& config, std::uint64_t seed, NerMode mode = NerMode::kCharLm);

}  // namespace biopipe

#endif  // BIOPIPE_NER_HPP_
