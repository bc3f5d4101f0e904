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

#ifndef BIOPIPE_PACKAGE_HPP_
#define BIOPIPE_PACKAGE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biopipe/charlm.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/lemmatizer.hpp"
#include "biopipe/ner.hpp"
#include "biopipe/parser.hpp"
#include "biopipe/segmenter.hpp"
#include "biopipe/tagger.hpp"

namespace biopipe {

inline constexpr int kSchemaVersion = 1;

// Processor names in dependency order.
inline const std::vector<std::string> kProcessorOrder = {"tokenize", "pos", "lemma", "depparse", "charlm", "ner"};

struct CharLmPair {
  CharLm forward;
  CharLm backward;
};

struct ModelPackage {
  std::string name;
  std::string version = "1.0.0";
  std::optional<SegmenterModel> tokenize;
  std::optional<TaggerModel> pos;
  std::optional<Lemmatizer> lemma;
  std::optional<ParserModel> depparse;
  std::optional<CharLmPair> charlm;
  std::optional<NerModel> ner;

  std::vector<std::string> processors() const;
};

// Lowercase hex SHA-256 of bytes.
std::string sha256_hex(std::string_view bytes);

// Weight file: "BPW1", uint32 array count, then per array uint32 name length,
// name bytes, uint32 rank, uint32 extents, float32 values. All little-endian.
std::string encode_weights(const ParamList& params);
// Fills params by name; throws PackageError on missing names or shape skew.
void decode_weights(std::string_view bytes, const ParamList& params, const std::string& file);

// Writes <dir>/manifest.json plus <processor>.weights and <processor>.vocab.json
// per processor. Existing files of listed processors are replaced.
void save_package(const ModelPackage& package, const std::filesystem::path& dir);

// Throws PackageError on schema skew, missing files or checksum mismatch.
ModelPackage load_package(const std::filesystem::path& dir);

// Package names (subdirectories holding a manifest) in sorted order.
std::vector<std::string> list_packages(const std::filesystem::path& registry);

// Registry root from the explicit path, else BIOPIPE_REGISTRY, else "registry".
std::filesystem::path resolve_registry(const std::optional<std::string>& explicit_path);

// A name is looked up in the registry; a path to a directory with a manifest
// is used as is. Throws ConfigError listing the available packages.
std::filesystem::path package_path(const std::filesystem::path& registry, const std::string& name);

}  // namespace biopipe

#endif  // BIOPIPE_PACKAGE_HPP_
