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

#include <gtest/gtest.h>

#include <sstream>

#include "biopipe/error.hpp"
#include "biopipe/evaluation.hpp"
#include "oracles.hpp"
#include "scorer_fixtures.hpp"

namespace biopipe {
namespace {

using testing::conllu_document;

double pct(double v) { return std::round(v * 10000.0) / 100.0; }

TEST(Align, IdenticalIsPerfect) {
  const Document d = conllu_document(testing::kGoldWalk);
  const MetricReport r = evaluate_documents(d, d);
  for (const auto& [name, s] : r.rows) EXPECT_EQ(pct(s.f1()), 100.0) << name;
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Align, HyphenDivergenceAlignsNothing) {
  const Alignment a = align_tokens(conllu_document(testing::kSystemHyphen), conllu_document(testing::kGoldHyphen));
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_EQ(a.tokens.f1(), 0.0);
  EXPECT_EQ(a.system_words, 1u);
  EXPECT_EQ(a.gold_words, 3u);
}

TEST(Align, SplitTokenScores) {
  const Alignment a = align_tokens(conllu_document(testing::kSplitWalk), conllu_document(testing::kGoldWalk));
  EXPECT_DOUBLE_EQ(a.tokens.precision(), 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(a.tokens.recall(), 3.0 / 4.0);
  EXPECT_EQ(pct(a.tokens.f1()), 66.67);
}

TEST(Align, DifferentTextIsContractError) {
  EXPECT_THROW(align_tokens(conllu_document(testing::kGoldWalk), conllu_document(testing::kGoldHyphen)),
               ContractError);
  Document d = conllu_document(testing::kGoldWalk);
  Document nospan = d;
  nospan.sentences[0].words[1].span.reset();
  EXPECT_THROW(align_tokens(nospan, d), ContractError);
}

TEST(Parse, OneWrongHead) {
  const MetricReport r = evaluate_documents(conllu_document(testing::kWrongHeadWalk), conllu_document(testing::kGoldWalk));
  EXPECT_EQ(pct(r.at("UAS").f1()), 75.0);
  EXPECT_EQ(pct(r.at("LAS").f1()), 75.0);
  EXPECT_EQ(pct(r.at("UPOS").f1()), 100.0);
}

TEST(Parse, LasNeverExceedsUas) {
  for (const char* sys : {testing::kSplitWalk, testing::kWrongHeadWalk, testing::kWrongUposWalk}) {
    const MetricReport r = evaluate_documents(conllu_document(sys), conllu_document(testing::kGoldWalk));
    EXPECT_LE(r.at("LAS").correct, r.at("UAS").correct);
  }
}

TEST(Parse, SubtypesIgnoredForLas) {
  Document sys = conllu_document(testing::kGoldWalk);
  sys.sentences[0].words[3].deprel = "obl";
  const MetricReport r = evaluate_documents(sys, conllu_document(testing::kGoldWalk));
  EXPECT_EQ(pct(r.at("LAS").f1()), 100.0);
}

TEST(MlasBlex, WrongUposOnContentWord) {
  const MetricReport r = evaluate_documents(conllu_document(testing::kWrongUposWalk), conllu_document(testing::kGoldWalk));
  EXPECT_LT(r.at("MLAS").f1(), r.at("LAS").f1());
  EXPECT_EQ(pct(r.at("MLAS").f1()), 75.0);
  EXPECT_EQ(pct(r.at("BLEX").f1()), 100.0);
  EXPECT_EQ(pct(r.at("LAS").f1()), 100.0);
}

TEST(MlasBlex, FunctionalChildrenMustMatch) {
  const char* gold =
      "1\tthe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
      "2\tcell\tcell\tNOUN\tNN\t_\t0\troot\t_\t_\n\n";
  const char* sys =
      "1\tthe\tthe\tPRON\tDT\t_\t2\tdet\t_\t_\n"
      "2\tcell\tcell\tNOUN\tNN\t_\t0\troot\t_\t_\n\n";
  const MetricReport r = evaluate_documents(conllu_document(sys), conllu_document(gold));
  EXPECT_EQ(r.at("MLAS").correct, 0u);
  EXPECT_EQ(r.at("BLEX").correct, 1u);
}

TEST(MlasBlex, VacuousCaseWarns) {
  const Document d = conllu_document(testing::kNoContent);
  const MetricReport r = evaluate_documents(d, d);
  EXPECT_EQ(pct(r.at("MLAS").f1()), 100.0);
  EXPECT_EQ(pct(r.at("BLEX").f1()), 100.0);
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(Entities, WorkedExamples) {
  const std::vector<std::vector<TaggedSpan>> gold = {{{0, 2, "problem", ""}, {3, 4, "test", ""}}};
  EXPECT_DOUBLE_EQ(entity_f1(gold, gold).f1(), 1.0);
  const std::vector<std::vector<TaggedSpan>> sys = {{{0, 2, "problem", ""}, {5, 6, "test", ""}}};
  const Score s = entity_f1(sys, gold);
  EXPECT_DOUBLE_EQ(s.precision(), 0.5);
  EXPECT_DOUBLE_EQ(s.recall(), 0.5);
  EXPECT_DOUBLE_EQ(s.f1(), 0.5);
  const Score off = entity_f1({{{0, 1, "problem", ""}}}, {{{0, 2, "problem", ""}}});
  EXPECT_EQ(off, (Score{0, 1, 1}));
  EXPECT_EQ(entity_f1({}, gold), (Score{0, 0, 2}));
}

TEST(Entities, DocumentLevel) {
  Document g = conllu_document(testing::kGoldWalk);
  g.entities.push_back({"walked home", "event", Span{4, 15}, 0, 1, 3});
  Document s = g;
  EXPECT_DOUBLE_EQ(entity_f1(s, g).f1(), 1.0);
  s.entities[0].type = "other";
  EXPECT_EQ(entity_f1(s, g), (Score{0, 1, 1}));
  EXPECT_TRUE(evaluate_documents(s, g).has("Entities"));
}

TEST(Report, InvariantsAndFormat) {
  const MetricReport r = evaluate_documents(conllu_document(testing::kSplitWalk), conllu_document(testing::kGoldWalk));
  for (const auto& [name, s] : r.rows) {
    const double p = s.precision(), rc = s.recall(), f = s.f1();
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_LE(rc, 1.0);
    if (p + rc > 0) EXPECT_NEAR(f, 2 * p * rc / (p + rc), 1e-12);
  }
  const std::string text = r.format();
  EXPECT_NE(text.find("tokens.f1=66.67"), std::string::npos) << text;
  EXPECT_NE(text.find("Tokens     |     60.00 |     75.00 |     66.67"), std::string::npos) << text;
  EXPECT_NE(text.find("morphological features"), std::string::npos);
}

TEST(Report, SentenceOrderInvariant) {
  const std::string g2 = std::string(testing::kGoldWalk) + testing::kGoldHyphen;
  const std::string s2 = std::string(testing::kWrongUposWalk) + testing::kSystemHyphen;
  const std::string g2r = std::string(testing::kGoldHyphen) + testing::kGoldWalk;
  const std::string s2r = std::string(testing::kSystemHyphen) + testing::kWrongUposWalk;
  const MetricReport a = evaluate_documents(conllu_document(s2.c_str()), conllu_document(g2.c_str()));
  const MetricReport b = evaluate_documents(conllu_document(s2r.c_str()), conllu_document(g2r.c_str()));
  for (const auto& [name, s] : a.rows) EXPECT_EQ(s, b.at(name)) << name;
}

TEST(Report, PerfectSentenceAddedIsMonotone) {
  const std::string g = std::string(testing::kGoldWalk) + testing::kGoldHyphen;
  const std::string s = std::string(testing::kWrongHeadWalk) + testing::kGoldHyphen;
  const MetricReport before = evaluate_documents(conllu_document(testing::kWrongHeadWalk), conllu_document(testing::kGoldWalk));
  const MetricReport after = evaluate_documents(conllu_document(s.c_str()), conllu_document(g.c_str()));
  for (const auto& [name, sc] : before.rows) {
    const Score& a = after.at(name);
    EXPECT_GE(a.correct, sc.correct) << name;
    EXPECT_GE(a.f1() + 1e-12, sc.f1()) << name;
  }
}

TEST(Benchmark, SelfRatioAndRepetitions) {
  const auto work = [] {
    volatile double x = 0;
    for (int i = 0; i < 200000; ++i) x = x + i * 0.5;
    return std::size_t{1000};
  };
  const BenchmarkRun a = run_benchmark("base", work, 3);
  ASSERT_EQ(a.seconds.size(), 3u);
  EXPECT_DOUBLE_EQ(relative_runtime(a, a), 1.0);
  const std::string report = benchmark_report({a}, "base");
  EXPECT_NE(report.find("base.relative=1.00"), std::string::npos) << report;
  EXPECT_THROW(benchmark_report({a}, "missing"), ContractError);
}

TEST(Benchmark, ReportColumnsAlignForLongNames) {
  const BenchmarkRun a{"tokenize+pos+lemma+depparse", 100, {0.5, 0.5, 0.5}};
  const BenchmarkRun b{"pipeline", 100, {1.0, 1.0, 1.0}};
  std::istringstream in(benchmark_report({a, b}, "pipeline"));
  std::string line;
  std::getline(in, line);
  std::size_t column = std::string::npos;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) {
    const std::size_t bar = line[0] == '-' ? line.find('+') : line.find('|');
    if (column == std::string::npos) column = bar;
    EXPECT_EQ(bar, column) << line;
  }
  EXPECT_GT(column, a.name.size() - 1);
}

TEST(Benchmark, DoublingWorkRoughlyDoublesTime) {
  const auto make = [](int n) {
    return [n] {
      volatile double x = 0;
      for (int i = 0; i < n; ++i) x = x + std::sqrt(static_cast<double>(i));
      return static_cast<std::size_t>(n);
    };
  };
  run_benchmark("warmup", make(2000000), 1);
  const BenchmarkRun one = run_benchmark("one", make(4000000), 3);
  const BenchmarkRun two = run_benchmark("two", make(8000000), 3);
  const double ratio = relative_runtime(two, one);
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}

}  // namespace
}  // namespace biopipe
