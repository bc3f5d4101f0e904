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

#ifndef BIOPIPE_DOCUMENT_HPP_
#define BIOPIPE_DOCUMENT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace biopipe {

// Half-open range of Unicode scalar offsets into a document's raw text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

// One syntactic word. String fields hold "_" when unannotated and head is -1
// until a parser or treebank supplies it.
struct Word {
  int id = 0;
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  int head = -1;
  std::string deprel = "_";
  std::string deps = "_";
  // MISC entries other than the character offsets, in file order.
  std::vector<std::string> misc;
  std::optional<Span> span;

  bool operator==(const Word&) const = default;
};

struct Sentence {
  // Full comment lines, including the leading '#'.
  std::vector<std::string> comments;
  std::vector<Word> words;

  bool operator==(const Sentence&) const = default;
};

struct Entity {
  std::string text;
  std::string type;
  Span span;  // character offsets into Document::text
  std::size_t sentence = 0;
  std::size_t start_token = 0;  // half-open token range within the sentence
  std::size_t end_token = 0;

  bool operator==(const Entity&) const = default;
};

struct Document {
  std::string text;
  std::vector<Sentence> sentences;
  std::vector<Entity> entities;

  std::size_t num_words() const {
    std::size_t n = 0;
    for (const Sentence& s : sentences) n += s.words.size();
    return n;
  }
  bool operator==(const Document&) const = default;
};

// One "id<TAB>form<TAB>head<TAB>deprel" line per word.
std::string format_dependencies(const Sentence& sentence);

// One "text<TAB>type" line per entity.
std::string format_entities(const Document& doc);

// Substring of UTF-8 text addressed by scalar offsets.
std::string substr_scalars(const std::string& text, Span span);

}  // namespace biopipe

#endif  // BIOPIPE_DOCUMENT_HPP_
