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

#ifndef BIOPIPE_BIOES_HPP_
#define BIOPIPE_BIOES_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace biopipe {

// Entity mention over a token sequence, half-open [start, end).
struct TaggedSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
  std::string text;

  bool operator==(const TaggedSpan& other) const {
    return start == other.start && end == other.end && type == other.type;
  }
};

// Single-token spans become S-type, longer ones B-type I-type... E-type.
// Throws DataError on overlapping or out-of-range spans.
std::vector<std::string> encode_bioes(const std::vector<TaggedSpan>& spans, std::size_t length);

// Reads spans back from any tag sequence. Ill-formed input is repaired: an
// I or E that does not continue an open span of its type starts a new one,
// and a span left open by O, B, S, or a type change is closed where it stops.
// Unknown tags count as O.
std::vector<TaggedSpan> decode_bioes(const std::vector<std::string>& tags);

// Converts a BIO sequence (or any mix of BIO/BIOES) to canonical BIOES.
std::vector<std::string> bio_to_bioes(const std::vector<std::string>& tags);

}  // namespace biopipe

#endif  // BIOPIPE_BIOES_HPP_
