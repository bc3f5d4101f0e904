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

#include <thread>

#include "biopipe/corpus.hpp"
#include "biopipe/error.hpp"
#include "biopipe/pipeline.hpp"
#include "biopipe/unicode.hpp"
#include "toy_package.hpp"

namespace biopipe {
namespace {

namespace fs = std::filesystem;
using testing::scratch_dir;

// Registry with "toy-craft" (every processor) and "toy-i2b2" (tokenize and
// ner only), saved once per process.
const fs::path& registry() {
  static const fs::path reg = [] {
    const fs::path dir = fs::path(::testing::TempDir()) / "biopipe_pipeline_registry";
    fs::remove_all(dir);
    ModelPackage craft = testing::tiny_package("toy-craft");
    save_package(craft, dir / "toy-craft");
    ModelPackage i2b2 = testing::tiny_package("toy-i2b2");
    i2b2.pos.reset();
    i2b2.lemma.reset();
    i2b2.depparse.reset();
    save_package(i2b2, dir / "toy-i2b2");
    ModelPackage mimic = testing::tiny_package("toy-mimic");
    mimic.ner.reset();
    save_package(mimic, dir / "toy-mimic");
    return dir;
  }();
  return reg;
}

Pipeline build(const std::string& package, const std::string& spec = "", bool pretokenized = false) {
  PipelineConfig config;
  config.package = package;
  config.pretokenized = pretokenized;
  if (!spec.empty()) parse_processor_spec(spec, config);
  return build_pipeline(config, registry());
}

TEST(ProcessorSpec, ParsesSelectionsAndOverrides) {
  PipelineConfig c;
  parse_processor_spec("tokenize, pos,ner=toy-i2b2", c);
  EXPECT_EQ(c.processors, (std::vector<std::string>{"tokenize", "pos"}));
  EXPECT_EQ(c.overrides, (std::map<std::string, std::string>{{"ner", "toy-i2b2"}}));
  PipelineConfig bad;
  EXPECT_THROW(parse_processor_spec("tokenize,,pos", bad), ConfigError);
  EXPECT_THROW(parse_processor_spec("sentiment", bad), ConfigError);
  EXPECT_THROW(parse_processor_spec("ner=", bad), ConfigError);
  EXPECT_THROW(parse_processor_spec("sentiment=toy", bad), ConfigError);
}

TEST(BuildPipeline, DefaultsToEveryPackagedStage) {
  const Pipeline p = build("toy-craft");
  EXPECT_EQ(p.stages(), (std::vector<std::string>{"tokenize", "pos", "lemma", "depparse", "ner"}));
  const Pipeline q = build("toy-craft", "tokenize,pos,lemma,depparse");
  EXPECT_EQ(q.stages(), (std::vector<std::string>{"tokenize", "pos", "lemma", "depparse"}));
  EXPECT_EQ(q.recognizer(), nullptr);
}

TEST(BuildPipeline, NerOverrideComesFromAnotherPackage) {
  EXPECT_FALSE(build("toy-mimic").has("ner"));
  const Pipeline p = build("toy-mimic", "ner=toy-i2b2");
  EXPECT_TRUE(p.has("ner"));
  EXPECT_TRUE(p.has("depparse"));
  EXPECT_EQ(build("toy-mimic", "tokenize,ner=toy-i2b2").stages(), (std::vector<std::string>{"tokenize", "ner"}));
  const Document doc = annotate(p, "The patient had a sore throat.");
  EXPECT_EQ(doc.sentences.size(), 1u);
}

TEST(BuildPipeline, ConfigurationErrors) {
  try {
    build("toy-nope");
    FAIL() << "expected a configuration error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("toy-craft, toy-i2b2, toy-mimic"), std::string::npos) << e.what();
  }
  EXPECT_THROW(build("toy-i2b2", "tokenize,pos"), ConfigError);
  EXPECT_THROW(build("toy-craft", "tokenize,depparse"), ConfigError);
  EXPECT_THROW(build("toy-craft", "pos,lemma"), ConfigError);
  EXPECT_THROW(build("toy-craft", "tokenize,ner=toy-missing"), ConfigError);
  EXPECT_NO_THROW(build("toy-craft", "tokenize,ner"));
  EXPECT_NO_THROW(build("toy-craft", "pos,lemma", true));
}

TEST(Annotate, EmptyAndInvalidInput) {
  const Pipeline p = build("toy-craft");
  EXPECT_EQ(annotate(p, ""), Document{});
  EXPECT_THROW(annotate(p, std::string("caf\xc3", 4)), InputError);
}

TEST(Annotate, EqualsManualComposition) {
  const Pipeline p = build("toy-craft");
  const std::string text = "She didn't go. The cells grew.\n\nThe patient had a sore throat.";
  Document manual = segment(*p.tokenizer(), text);
  tag_document(*p.tagger(), manual);
  lemmatize_document(*p.lemmatizer(), manual);
  parse_document(*p.parser(), manual);
  recognize_document(*p.recognizer(), manual);
  EXPECT_EQ(annotate(p, text), manual);
}

TEST(Annotate, SpansIndexTheTextAndTreesAreValid) {
  const Pipeline p = build("toy-craft");
  const Document doc = annotate(p, "Cells did that. She didn't go.");
  ASSERT_FALSE(doc.sentences.empty());
  for (const Sentence& s : doc.sentences) {
    EXPECT_EQ(tree_error(s), "");
    for (const Word& w : s.words) {
      ASSERT_TRUE(w.span.has_value());
      EXPECT_EQ(substr_scalars(doc.text, *w.span), w.form);
    }
  }
  for (const Entity& e : doc.entities) EXPECT_EQ(substr_scalars(doc.text, e.span), e.text);
}

TEST(Annotate, DeterministicAndThreadSafe) {
  const Pipeline p = build("toy-craft");
  const std::string text = "The cells grew. She didn't go.";
  const Document first = annotate(p, text);
  std::vector<Document> results(4);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < results.size(); ++i) {
    workers.emplace_back([&, i] { results[i] = annotate(p, text); });
  }
  for (auto& t : workers) t.join();
  for (const Document& d : results) EXPECT_EQ(d, first);
}

TEST(Pretokenized, KeepsTokensVerbatim) {
  const Pipeline p = build("toy-craft", "", true);
  EXPECT_FALSE(p.has("tokenize"));
  const Document doc = annotate_pretokenized(p, {{"He", "had", "a", "sore", "throat", "."}});
  ASSERT_EQ(doc.sentences.size(), 1u);
  std::vector<std::string> forms;
  for (const Word& w : doc.sentences[0].words) forms.push_back(w.form);
  EXPECT_EQ(forms, (std::vector<std::string>{"He", "had", "a", "sore", "throat", "."}));
  EXPECT_EQ(doc.text, "He had a sore throat .");
  EXPECT_NE(doc.sentences[0].words[0].upos, "_");

  const Document two = annotate(p, "A b c\nd e\n");
  ASSERT_EQ(two.sentences.size(), 2u);
  EXPECT_EQ(two.sentences[0].words.size(), 3u);
  EXPECT_EQ(two.sentences[1].words.size(), 2u);
}

TEST(Pretokenized, RejectsBadTokens) {
  const Pipeline p = build("toy-craft", "", true);
  EXPECT_THROW(annotate_pretokenized(p, {{"a", ""}}), InputError);
  EXPECT_THROW(annotate_pretokenized(p, {{"sore throat"}}), InputError);
  EXPECT_THROW(annotate_pretokenized(p, {{"tab\there"}}), InputError);
  EXPECT_THROW(annotate_pretokenized(p, {{"a"}, {}}), InputError);
}

TEST(Pretokenized, FuzzedTokensAreNeverAltered) {
  const Pipeline p = build("toy-craft", "tokenize,ner", true);
  const std::u32string alphabet = U"abcXYZ.-'é漢0";
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<std::string>> sentences(1 + rng.below(3));
    for (auto& s : sentences) {
      s.resize(1 + rng.below(5));
      for (auto& tok : s) {
        std::u32string t;
        for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) t += alphabet[rng.below(alphabet.size())];
        tok = utf8_encode(t);
      }
    }
    const Document doc = annotate_pretokenized(p, sentences);
    ASSERT_EQ(doc.sentences.size(), sentences.size());
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      ASSERT_EQ(doc.sentences[s].words.size(), sentences[s].size());
      for (std::size_t w = 0; w < sentences[s].size(); ++w) {
        ASSERT_EQ(doc.sentences[s].words[w].form, sentences[s][w]);
        ASSERT_EQ(substr_scalars(doc.text, *doc.sentences[s].words[w].span), sentences[s][w]);
      }
    }
  }
}

TEST(GoldInput, TokensAndTagsComeFromGold) {
  const Pipeline p = build("toy-craft");
  const Document gold = document_from_treebank(testing::tiny_treebank());
  const Document tok = annotate_gold_input(p, gold, EvalMode::kGoldTokens);
  const Document tag = annotate_gold_input(p, gold, EvalMode::kGoldTags);
  ASSERT_EQ(tok.sentences.size(), gold.sentences.size());
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    ASSERT_EQ(tok.sentences[s].words.size(), gold.sentences[s].words.size());
    for (std::size_t w = 0; w < gold.sentences[s].words.size(); ++w) {
      const Word& g = gold.sentences[s].words[w];
      EXPECT_EQ(tok.sentences[s].words[w].span, g.span);
      EXPECT_EQ(tag.sentences[s].words[w].upos, g.upos);
      EXPECT_EQ(tag.sentences[s].words[w].xpos, g.xpos);
    }
  }
  const MetricReport r = evaluate_documents(tag, gold);
  EXPECT_DOUBLE_EQ(r.at("Tokens").f1(), 1.0);
  EXPECT_DOUBLE_EQ(r.at("UPOS").f1(), 1.0);
  EXPECT_EQ(parse_eval_mode("goldtag"), EvalMode::kGoldTags);
  EXPECT_THROW(parse_eval_mode("gold"), ConfigError);
}

TEST(StripAnnotations, KeepsOnlyTokens) {
  const Document gold = document_from_treebank(testing::tiny_treebank());
  const Document bare = strip_annotations(gold);
  EXPECT_EQ(bare.text, gold.text);
  EXPECT_EQ(segmentation_of(bare), segmentation_of(gold));
  EXPECT_EQ(bare.sentences[0].words[0].upos, "_");
  EXPECT_EQ(bare.sentences[0].words[0].head, -1);
}

TEST(Silver, SplitsAreDeterministicAndValid) {
  const fs::path notes = scratch_dir("notes");
  for (int i = 0; i < 8; ++i) {
    write_file(notes / ("n" + std::to_string(i) + ".txt"), "The patient had a sore throat. She didn't go.\n");
  }
  const Pipeline p = build("toy-craft", "tokenize,pos,lemma,depparse");
  const NoteCollection collection = read_notes(notes);
  const auto a = build_silver_splits(p, collection, {6, 1, 1}, 3);
  const auto b = build_silver_splits(p, collection, {6, 1, 1}, 3);
  EXPECT_EQ(a, b);
  for (const Treebank& tb : a) {
    const std::string bytes = write_conllu(tb);
    EXPECT_EQ(write_conllu(read_conllu(bytes)), bytes);
    for (const Sentence& s : tb.sentences) EXPECT_EQ(tree_error(s), "");
  }
  EXPECT_EQ(a[0].role, Role::kTrain);
  EXPECT_EQ(a[2].role, Role::kTest);
}

TEST(Silver, SplitSpec) {
  EXPECT_EQ(parse_split("6:1:1"), (std::array<std::size_t, 3>{6, 1, 1}));
  for (const char* bad : {"6:1", "6:1:1:1", "a:1:1", "0:0:0", "6::1"}) {
    EXPECT_THROW(parse_split(bad), ConfigError) << bad;
  }
}

TEST(EntityTable, ListsScalarOffsets) {
  Document doc;
  doc.text = "Ä sore throat";
  doc.entities.push_back(Entity{"sore throat", "problem", Span{2, 13}, 0, 1, 3});
  EXPECT_EQ(format_entity_table(doc), "sore throat\tproblem\t2\t13\n");
}

TEST(Benchmark, ReportsCumulativeStages) {
  const Pipeline p = build("toy-craft", "tokenize,pos,lemma,depparse");
  const auto runs = benchmark_pipeline(p, "She didn't go. The cells grew.", 2);
  ASSERT_EQ(runs.size(), 4u);
  EXPECT_EQ(runs[0].name, "tokenize");
  EXPECT_EQ(runs[2].name, "tokenize+pos+lemma");
  EXPECT_EQ(runs[3].name, "pipeline");
  for (const auto& r : runs) EXPECT_EQ(r.seconds.size(), 2u);
  EXPECT_NE(benchmark_report(runs, "pipeline").find("pipeline.relative=1.00"), std::string::npos);
  EXPECT_THROW(benchmark_pipeline(p, "x", 0), ConfigError);
}

}  // namespace
}  // namespace biopipe
