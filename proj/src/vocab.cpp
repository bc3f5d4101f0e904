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

#include "biopipe/core/vocab.hpp"

#include "biopipe/error.hpp"

namespace biopipe {

Vocab Vocab::from_items(std::vector<std::string> items, bool open) {
  Vocab v(false);
  v.open_ = open;
  if (open && (items.empty() || items[0] != kUnkToken)) {
    throw DataError("open vocabulary must start with " + std::string(kUnkToken));
  }
  for (const std::string& s : items) {
    if (v.find(s)) throw DataError("duplicate vocabulary item '" + s + "'");
    v.add(s);
  }
  return v;
}

std::size_t Vocab::add(const std::string& item) {
  const auto it = index_.find(item);
  if (it != index_.end()) return it->second;
  items_.push_back(item);
  index_.emplace(item, items_.size() - 1);
  return items_.size() - 1;
}

std::optional<std::size_t> Vocab::find(const std::string& item) const {
  const auto it = index_.find(item);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocab::index(const std::string& item) const {
  const auto it = index_.find(item);
  if (it != index_.end()) return it->second;
  if (open_) return 0;
  throw DataError("label '" + item + "' is not in the inventory");
}

CharVocab CharVocab::from_items(const std::vector<char32_t>& items) {
  CharVocab v;
  if (items.empty() || items[0] != 0) throw DataError("character vocabulary must start with the unknown slot");
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (v.index_.count(items[i])) throw DataError("duplicate character in vocabulary");
    v.add(items[i]);
  }
  return v;
}

std::size_t CharVocab::add(char32_t c) {
  const auto it = index_.find(c);
  if (it != index_.end()) return it->second;
  items_.push_back(c);
  index_.emplace(c, items_.size() - 1);
  return items_.size() - 1;
}

}  // namespace biopipe
