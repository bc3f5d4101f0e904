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

#ifndef BIOPIPE_ABLATION_HPP_
#define BIOPIPE_ABLATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "biopipe/charlm.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/evaluation.hpp"
#include "biopipe/ner.hpp"

namespace biopipe {

// Micro entity score of a model over tagged sentences.
Score ner_score(const NerModel& model, const std::vector<TaggedSentence>& corpus);

struct AblationResult {
  Score charlm;
  Score baseline;
  // Two-row table of dev precision, recall and F1, then the F1 gain.
  std::string table;
};

// Trains the CharLM-fed and the character-BiLSTM NER models with the same
// config and seed and scores both on dev.
AblationResult charlm_ablation(const std::vector<TaggedSentence>& train, const std::vector<TaggedSentence>& dev,
                               const CharLm& fwd, const CharLm& bwd, const NerConfig& config, std::uint64_t seed);

}  // namespace biopipe

#endif  // BIOPIPE_ABLATION_HPP_
