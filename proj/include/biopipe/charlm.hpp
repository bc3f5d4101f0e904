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

#ifndef BIOPIPE_CHARLM_HPP_
#define BIOPIPE_CHARLM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "biopipe/core/adam.hpp"
#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/vocab.hpp"
#include "biopipe/document.hpp"
#include "biopipe/random.hpp"

namespace biopipe {

enum class Direction : std::uint8_t { kForward = 0, kBackward = 1 };

const char* direction_name(Direction d);

// Drops every sentence containing an anonymization mask "[**...**]".
std::vector<std::string> filter_corpus(const std::vector<std::string>& sentences);

struct CharLmConfig {
  std::size_t char_dim = 16;
  std::size_t hidden_dim = 64;
  // Truncated backpropagation length in characters.
  std::size_t chunk = 48;
  std::size_t epochs = 4;
  AdamConfig adam{};
};

struct CharLm {
  Direction direction = Direction::kForward;
  CharLmConfig config;
  CharVocab chars;
  Embedding embedding;
  LstmParams lstm;
  Linear output;

  CharLm() = default;
  CharLm(Direction dir, CharLmConfig cfg, CharVocab vocab);

  void init(Rng& rng);
  ParamList parameters();
};

// Next-character cross-entropy summed over a chunk of the model's own
// stream (already reversed for backward models), starting from state (h, c).
// The final state is written back to h and c.
Var charlm_loss(Graph& g, CharLm& model, std::u32string_view stream, Tensor& h, Tensor& c);

// Hidden state after each character, indexed by original text position.
// For a backward model, states[i] has consumed text[n-1] down to text[i].
std::vector<Tensor> charlm_states(const CharLm& model, const std::u32string& text);

// Per-epoch training perplexity is appended to perplexity when given.
// Throws DataError on an empty corpus.
CharLm train_charlm(const std::string& corpus, Direction direction, const CharLmConfig& config, std::uint64_t seed,
                    std::vector<double>* perplexity = nullptr);

// Character text of pre-tokenized tokens joined by single spaces, with the
// token spans in that text.
std::u32string join_tokens(const std::vector<std::string>& tokens, std::vector<Span>* spans);

// One vector per token: forward state at the character after the token (the
// last character for the final token) and backward state at the character
// before it (the first character for the initial token).
// Throws DataError on malformed spans.
std::vector<Tensor> contextual_embed(const CharLm& fwd, const CharLm& bwd, const std::u32string& text,
                                     const std::vector<Span>& spans);

// Same boundary rule applied to precomputed state sequences.
std::size_t forward_boundary(const Span& token, std::size_t text_length);
std::size_t backward_boundary(const Span& token);

}  // namespace biopipe

#endif  // BIOPIPE_CHARLM_HPP_
