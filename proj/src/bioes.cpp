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

#include "biopipe/bioes.hpp"

#include <algorithm>

#include "biopipe/error.hpp"

namespace biopipe {

namespace {

// Splits "B-problem" into ('B', "problem"); 'O' for "O" and unknown tags.
std::pair<char, std::string> split_tag(const std::string& tag) {
  if (tag.size() >= 3 && tag[1] == '-' && std::string("BIES").find(tag[0]) != std::string::npos) {
    return {tag[0], tag.substr(2)};
  }
  return {'O', ""};
}

}  // namespace

std::vector<std::string> encode_bioes(const std::vector<TaggedSpan>& spans, std::size_t length) {
  std::vector<std::string> tags(length, "O");
  std::vector<TaggedSpan> sorted = spans;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  std::size_t last_end = 0;
  for (const TaggedSpan& s : sorted) {
    if (s.start >= s.end || s.end > length) throw DataError("entity span out of range");
    if (s.start < last_end) throw DataError("overlapping entity spans");
    if (s.type.empty()) throw DataError("entity span without a type");
    last_end = s.end;
    if (s.end - s.start == 1) {
      tags[s.start] = "S-" + s.type;
      continue;
    }
    tags[s.start] = "B-" + s.type;
    for (std::size_t i = s.start + 1; i + 1 < s.end; ++i) tags[i] = "I-" + s.type;
    tags[s.end - 1] = "E-" + s.type;
  }
  return tags;
}

std::vector<TaggedSpan> decode_bioes(const std::vector<std::string>& tags) {
  std::vector<TaggedSpan> out;
  bool open = false;
  TaggedSpan cur;
  auto close = [&](std::size_t end) {
    if (!open) return;
    cur.end = end;
    out.push_back(cur);
    open = false;
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto [prefix, type] = split_tag(tags[i]);
    const bool continues = open && cur.type == type;
    switch (prefix) {
      case 'O':
        close(i);
        break;
      case 'S':
        close(i);
        out.push_back(TaggedSpan{i, i + 1, type, {}});
        break;
      case 'B':
        close(i);
        open = true;
        cur = TaggedSpan{i, i, type, {}};
        break;
      case 'I':
        if (!continues) {
          close(i);
          open = true;
          cur = TaggedSpan{i, i, type, {}};
        }
        break;
      case 'E':
        if (!continues) {
          close(i);
          open = true;
          cur = TaggedSpan{i, i, type, {}};
        }
        close(i + 1);
        break;
    }
  }
  close(tags.size());
  return out;
}

std::vector<std::string> bio_to_bioes(const std::vector<std::string>& tags) {
  return encode_bioes(decode_bioes(tags), tags.size());
}

}  // namespace biopipe
