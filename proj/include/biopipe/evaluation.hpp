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

#ifndef BIOPIPE_EVALUATION_HPP_
#define BIOPIPE_EVALUATION_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biopipe/bioes.hpp"
#include "biopipe/document.hpp"

namespace biopipe {

// Counts behind one precision/recall/F1 row. Values are fractions in [0, 1].
struct Score {
  std::size_t correct = 0;
  std::size_t system = 0;
  std::size_t gold = 0;

  double precision() const;
  double recall() const;
  // Harmonic mean of precision and recall, 0 when both are 0.
  double f1() const;
  bool operator==(const Score&) const = default;
};

struct WordRef {
  std::size_t sentence = 0;
  std::size_t word = 0;
  auto operator<=>(const WordRef&) const = default;
};

struct Alignment {
  std::vector<std::pair<WordRef, WordRef>> pairs;  // (system, gold), in gold order
  std::map<WordRef, WordRef> system_to_gold;
  std::size_t system_words = 0;
  std::size_t gold_words = 0;
  Score tokens;
  Score sentences;
};

// Pairs words whose character spans are equal. Throws ContractError when the
// raw texts differ or a word lacks a span.
Alignment align_tokens(const Document& system, const Document& gold);

// Universal part of a relation ("nmod:poss" -> "nmod").
std::string universal_deprel(const std::string& deprel);
bool is_content_deprel(const std::string& deprel);
bool is_functional_deprel(const std::string& deprel);

struct MetricReport {
  std::vector<std::pair<std::string, Score>> rows;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  // Throws std::out_of_range for an unknown row.
  const Score& at(const std::string& name) const;
  bool has(const std::string& name) const;
  void set(const std::string& name, const Score& score);

  // Aligned table on a 0-100 scale with two decimals, then key=value lines.
  std::string format() const;
};

// Rows UPOS, XPOS, Lemmas, UAS, LAS.
void score_parse(const Document& system, const Document& gold, const Alignment& alignment, MetricReport& report);

// Rows MLAS and BLEX over content words. Without any content word on either
// side both are reported as 100 with a warning.
void score_mlas_blex(const Document& system, const Document& gold, const Alignment& alignment,
                     MetricReport& report);

// Tokens, Sentences, UPOS, XPOS, Lemmas, UAS, LAS, MLAS, BLEX, and Entities
// when either side has entities.
MetricReport evaluate_documents(const Document& system, const Document& gold);

// Exact (start, end, type) matches, micro-averaged over sentences. A missing
// sentence on either side counts as empty.
Score entity_f1(const std::vector<std::vector<TaggedSpan>>& system, const std::vector<std::vector<TaggedSpan>>& gold);

// Exact (character span, type) matches over document entities.
Score entity_f1(const Document& system, const Document& gold);

struct BenchmarkRun {
  std::string name;
  std::size_t tokens = 0;
  std::vector<double> seconds;  // one entry per repetition

  double mean_seconds() const;
  double tokens_per_second() const;
};

// Times work() repetitions times in sequence; work returns the token count.
BenchmarkRun run_benchmark(const std::string& name, const std::function<std::size_t()>& work,
                           std::size_t repetitions = 3);

// Runtime of each run relative to the named baseline.
double relative_runtime(const BenchmarkRun& run, const BenchmarkRun& baseline);

// Relative-runtime table with absolute tokens/sec and each repetition.
// Throws ContractError when baseline_name is not among runs.
std::string benchmark_report(const std::vector<BenchmarkRun>& runs, const std::string& baseline_name);

}  // namespace biopipe

#endif  // BIOPIPE_EVALUATION_HPP_
