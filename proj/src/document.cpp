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

#include "biopipe/document.hpp"

#include "biopipe/unicode.hpp"

namespace biopipe {

std::string format_dependencies(const Sentence& sentence) {
  std::string out;
  for (const Word& w : sentence.words) {
    out += std::to_string(w.id) + "\t" + w.form + "\t" + (w.head < 0 ? "_" : std::to_string(w.head)) +
           "\t" + w.deprel + "\n";
  }
  return out;
}

std::string format_entities(const Document& doc) {
  std::string out;
  for (const Entity& e : doc.entities) out += e.text + "\t" + e.type + "\n";
  return out;
}

std::string substr_scalars(const std::string& text, Span span) {
  std::size_t idx = 0, pos = 0, begin = std::string::npos;
  while (pos < text.size()) {
    if (idx == span.start) begin = pos;
    if (idx == span.end) break;
    const auto b = static_cast<unsigned char>(text[pos]);
    pos += b < 0x80 ? 1 : (b >> 5) == 0x6 ? 2 : (b >> 4) == 0xE ? 3 : 4;
    ++idx;
  }
  if (begin == std::string::npos) return {};
  return text.substr(begin, pos - begin);
}

}  // namespace biopipe
