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

#ifndef BIOPIPE_CORPUS_HPP_
#define BIOPIPE_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biopipe/document.hpp"

namespace biopipe {

enum class Role { kTrain, kDev, kTest };

const char* role_name(Role role);

// Gold-annotated sentences. When raw_text is present, word spans index it.
struct Treebank {
  std::vector<Sentence> sentences;
  std::optional<std::string> raw_text;
  Role role = Role::kTrain;

  std::size_t num_words() const;
  bool operator==(const Treebank&) const = default;
};

// CoNLL-U. Comment lines and the FEATS/DEPS columns are kept verbatim;
// character offsets travel in MISC as start_char=/end_char= entries. Throws
// DataError naming the line on column-count violations, non-contiguous ids,
// multi-word or empty-node ids, and heads out of range.
Treebank read_conllu(std::string_view bytes, Role role = Role::kTrain);
std::string write_conllu(const Treebank& treebank);
std::string write_conllu(const Document& doc);

// Reads a .conllu file and, when given, the raw text file its offsets index.
Treebank load_treebank(const std::filesystem::path& conllu,
                       const std::optional<std::filesystem::path>& raw_text = std::nullopt);

Treebank treebank_from_document(const Document& doc, Role role = Role::kTrain);
Document document_from_treebank(const Treebank& treebank);

// Gives every word a span when none are present: forms are joined by single
// spaces inside a sentence (none after SpaceAfter=No) and sentences by
// newlines, and raw_text is set to the result. Treebanks that already carry
// spans get raw_text reconstructed from them if it is missing.
void attach_spans(Treebank& treebank);

// True when every word carries a span.
bool has_spans(const Treebank& treebank);

// Empty when the sentence's ids are 1..n and its heads form a tree rooted
// at 0 with exactly one root child; otherwise a description of the defect.
std::string tree_error(const Sentence& sentence);

// Sentences of a then b.
Treebank combine_treebanks(const Treebank& a, const Treebank& b);

struct Note {
  std::string id;
  std::string text;
  bool operator==(const Note&) const = default;
};

struct NoteCollection {
  std::vector<Note> notes;
};

// One UTF-8 file per note; identifiers are file names without extension,
// collected in sorted order.
NoteCollection read_notes(const std::filesystem::path& dir);

struct NoteSplit {
  NoteCollection train, dev, test;
};

// Split sizes for total items under the given ratios using largest-remainder
// rounding; remainder ties go to the earlier split.
std::array<std::size_t, 3> largest_remainder(std::size_t total, const std::array<std::size_t, 3>& ratios);

// Seeded shuffle followed by a cut at largest-remainder sizes.
NoteSplit stratified_split(const NoteCollection& notes, const std::array<std::size_t, 3>& ratios = {6, 1, 1},
                           std::uint64_t seed = 1);

// Sentence-segmented token spans over a text (scalar offsets).
using Segmentation = std::vector<std::vector<Span>>;

// Produces token and sentence boundaries for raw text.
using TokenizationHook = std::function<Segmentation(const std::string& text)>;

// Default hook: a regular-expression tokenizer that splits punctuation,
// hyphens, and "n't" contractions, keeps a few abbreviations and decimal
// numbers whole, and ends sentences at . ! ? and at blank lines.
Segmentation regex_tokenize(const std::string& text);

// Splits on whitespace only; every line is a sentence.
Segmentation whitespace_tokenize(const std::string& text);

// Throws DataError unless the spans are in order, non-empty, disjoint, free
// of whitespace, and inside a text of the given scalar length.
void validate_segmentation(const Segmentation& seg, const std::u32string& text);

// Annotates a text whose token and sentence boundaries are fixed.
using SegmentedAnnotator = std::function<Document(const std::string& text, const Segmentation& seg)>;

// For each note: segment with the hook, annotate the fixed segmentation, and
// append the sentences. Notes are joined by a blank line in raw_text and the
// spans are shifted accordingly.
Treebank build_silver_treebank(const NoteCollection& notes, const TokenizationHook& hook,
                               const SegmentedAnnotator& annotate, Role role = Role::kTrain);

// Token-per-line NER data: "token<TAB>tag", blank line between sentences.
struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;  // BIOES
  bool operator==(const TaggedSentence&) const = default;
};

// BIO input is converted to BIOES. Throws DataError on unknown tag prefixes
// and malformed lines.
std::vector<TaggedSentence> read_ner_corpus(std::string_view bytes);
std::string write_ner_corpus(const std::vector<TaggedSentence>& sentences);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace biopipe

#endif  // BIOPIPE_CORPUS_HPP_
