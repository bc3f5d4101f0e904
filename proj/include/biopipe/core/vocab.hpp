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

#ifndef BIOPIPE_CORE_VOCAB_HPP_
#define BIOPIPE_CORE_VOCAB_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace biopipe {

// String inventory. Open vocabularies reserve index 0 for unknown items;
// closed label sets have no unknown entry and index() throws on a miss.
class Vocab {
 public:
  static constexpr const char* kUnkToken = "<unk>";

  explicit Vocab(bool open = true) : open_(open) {
    if (open_) add(kUnkToken);
  }
  static Vocab from_items(std::vector<std::string> items, bool open);

  std::size_t add(const std::string& item);
  std::optional<std::size_t> find(const std::string& item) const;
  std::size_t index(const std::string& item) const;
  const std::string& item(std::size_t i) const { return items_.at(i); }
  std::size_t size() const { return items_.size(); }
  bool open() const { return open_; }
  const std::vector<std::string>& items() const { return items_; }

  bool operator==(const Vocab& other) const { return open_ == other.open_ && items_ == other.items_; }

 private:
  bool open_;
  std::vector<std::string> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Character inventory over Unicode scalars with index 0 reserved for
// unknown characters.
class CharVocab {
 public:
  static constexpr std::size_t kUnk = 0;

  CharVocab() : items_{0} {}
  static CharVocab from_items(const std::vector<char32_t>& items);

  std::size_t add(char32_t c);
  std::size_t index(char32_t c) const {
    const auto it = index_.find(c);
    return it == index_.end() ? kUnk : it->second;
  }
  char32_t item(std::size_t i) const { return items_.at(i); }
  std::size_t size() const { return items_.size(); }
  const std::vector<char32_t>& items() const { return items_; }

  bool operator==(const CharVocab& other) const { return items_ == other.items_; }

 private:
  std::vector<char32_t> items_;
  std::unordered_map<char32_t, std::size_t> index_;
};

}  // namespace biopipe

#endif  // BIOPIPE_CORE_VOCAB_HPP_
