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

#ifndef BIOPIPE_SEGMENTER_HPP_
#define BIOPIPE_SEGMENTER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "biopipe/core/adam.hpp"
#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/core/vocab.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/document.hpp"

namespace biopipe {

// Per-character boundary tag. A sentence end is also a token end.
enum class CharLabel : std::uint8_t { kInside = 0, kTokenEnd = 1, kSentenceEnd = 2 };

// Throws DataError on overlapping or out-of-range spans.
std::vector<CharLabel> make_char_labels(const std::u32string& text, const Segmentation& gold);

// Tokens are maximal runs of non-whitespace characters cut after every
// TOKEN_END or SENTENCE_END; whitespace never joins a token. A trailing
// unterminated token and sentence are closed at the end of the text.
Segmentation decode_boundaries(const std::u32string& text, const std::vector<CharLabel>& labels);

// Builds a Document whose words are the given spans.
Document document_from_segmentation(const std::string& text, const Segmentation& seg);

struct SegmenterConfig {
  std::size_t embedding_dim = 16;
  std::size_t hidden_dim = 32;
  // Inference window in characters; windows overlap by half.
  std::size_t window = 300;
  // Training chunk length in characters.
  std::size_t train_window = 120;
  std::size_t epochs = 30;
  std::size_t batch_size = 4;
  AdamConfig adam{};
};

// Number of per-character indicator features appended to the embedding.
inline constexpr std::size_t kCharFeatures = 5;

struct SegmenterModel {
  SegmenterConfig config;
  CharVocab vocab;
  Embedding embedding;
  LstmParams forward;
  LstmParams backward;
  Linear output;  // 2 * hidden -> 3

  SegmenterModel() = default;
  SegmenterModel(SegmenterConfig cfg, CharVocab chars);

  void init(Rng& rng);
  ParamList parameters();
};

// Logits (3 per character) for a chunk of text, recorded on g.
std::vector<Var> segmenter_logits(Graph& g, SegmenterModel& model, std::u32string_view chunk);

// Mean per-character cross-entropy of a chunk.
Var segmenter_loss(Graph& g, SegmenterModel& model, std::u32string_view chunk,
                   const std::vector<CharLabel>& labels);

// Argmax labels over the whole text with windowed majority-vote stitching.
// Whitespace is always INSIDE.
std::vector<CharLabel> predict_char_labels(const SegmenterModel& model, const std::u32string& text);

Document segment(const SegmenterModel& model, const std::string& text);

// Throws DataError if the treebank is empty or lacks character spans.
SegmenterModel train_segmenter(const Treebank& treebank, const SegmenterConfig& config, std::uint64_t seed);

// Gold token/sentence spans of a treebank that carries spans.
Segmentation treebank_segmentation(const Treebank& treebank);

}  // namespace biopipe

#endif  // BIOPIPE_SEGMENTER_HPP_
