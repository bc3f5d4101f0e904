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

#ifndef BIOPIPE_PIPELINE_HPP_
#define BIOPIPE_PIPELINE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "biopipe/corpus.hpp"
#include "biopipe/document.hpp"
#include "biopipe/evaluation.hpp"
#include "biopipe/package.hpp"

namespace biopipe {

struct PipelineConfig {
  std::string package;
  // Requested stages; empty means every stage the package provides.
  std::vector<std::string> processors;
  // Stage name to package name, e.g. {"ner", "toy-i2b2"}. Overridden stages
  // are added to the selection.
  std::map<std::string, std::string> overrides;
  bool pretokenized = false;
};

// Parses "tokenize,pos,ner=toy-i2b2": plain names select stages, name=package
// entries become overrides.
// Throws ConfigError on unknown stage names or empty entries.
void parse_processor_spec(const std::string& spec, PipelineConfig& config);

// Immutable once built; annotate calls may run concurrently.
class Pipeline {
 public:
  const PipelineConfig& config() const { return config_; }
  // Stages in execution order.
  const std::vector<std::string>& stages() const { return stages_; }
  bool has(const std::string& stage) const;

  const SegmenterModel* tokenizer() const { return tokenize_; }
  const TaggerModel* tagger() const { return pos_; }
  const Lemmatizer* lemmatizer() const { return lemma_; }
  const ParserModel* parser() const { return depparse_; }
  const NerModel* recognizer() const { return ner_; }

 private:
  friend Pipeline build_pipeline(const PipelineConfig&, const std::filesystem::path&);
  friend Pipeline pipeline_from_package(std::shared_ptr<const ModelPackage>, const PipelineConfig&);

  PipelineConfig config_;
  std::vector<std::shared_ptr<const ModelPackage>> packages_;
  std::vector<std::string> stages_;
  const SegmenterModel* tokenize_ = nullptr;
  const TaggerModel* pos_ = nullptr;
  const Lemmatizer* lemma_ = nullptr;
  const ParserModel* depparse_ = nullptr;
  const NerModel* ner_ = nullptr;
};

// Loads the package (and any override packages) from the registry.
// Throws ConfigError on unknown packages, stages, or unmet dependencies.
Pipeline build_pipeline(const PipelineConfig& config, const std::filesystem::path& registry);

// Same checks against an in-memory package; overrides are not allowed.
Pipeline pipeline_from_package(std::shared_ptr<const ModelPackage> package, const PipelineConfig& config);

// Raw text; with the pretokenized flag, lines are sentences and whitespace
// separates tokens. Throws InputError on invalid UTF-8.
Document annotate(const Pipeline& pipeline, const std::string& text);

// Tokens are kept verbatim; text is synthesized by joining tokens with one
// space and sentences with a newline. Throws InputError on an empty token or
// one containing whitespace.
Document annotate_pretokenized(const Pipeline& pipeline, const std::vector<std::vector<std::string>>& sentences);

// Runs every stage after tokenization on a segmented document in place.
void annotate_segmented(const Pipeline& pipeline, Document& doc);

// Token skeleton of a document: text, ids, forms and spans only.
Document strip_annotations(const Document& doc);

enum class EvalMode { kEnd2End, kGoldTokens, kGoldTags };
EvalMode parse_eval_mode(const std::string& name);

// System output for a gold document under the given input protocol. Gold
// tags keep gold UPOS and XPOS and skip the tagger.
Document annotate_gold_input(const Pipeline& pipeline, const Document& gold, EvalMode mode);

// Word spans per sentence.
Segmentation segmentation_of(const Document& doc);

// TSV lines "text<TAB>type<TAB>start<TAB>end" with scalar offsets.
std::string format_entity_table(const Document& doc);

// Silver treebanks for the train/dev/test split of the notes. The pipeline
// tokenizer is the hook when present, otherwise the regex tokenizer.
std::array<Treebank, 3> build_silver_splits(const Pipeline& pipeline, const NoteCollection& notes,
                                            const std::array<std::size_t, 3>& ratios, std::uint64_t seed);

// Parses "6:1:1". Throws ConfigError.
std::array<std::size_t, 3> parse_split(const std::string& spec);

// Cumulative stage prefixes timed on the corpus; the full pipeline is the
// baseline of the report.
std::vector<BenchmarkRun> benchmark_pipeline(const Pipeline& pipeline, const std::string& corpus, int reps = 3);

}  // namespace biopipe

#endif  // BIOPIPE_PIPELINE_HPP_
