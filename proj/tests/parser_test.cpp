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

#include <cmath>
#include <limits>

#include "biopipe/error.hpp"
#include "biopipe/parser.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace biopipe {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Tensor masked(const std::vector<std::vector<double>>& s) {
  const std::size_t m = s.size();
  Tensor t(Shape{m, m});
  for (std::size_t h = 0; h < m; ++h) {
    for (std::size_t d = 0; d < m; ++d) t.at(h, d) = (d == 0 || h == d) ? kNegInf : s[h][d];
  }
  return t;
}

std::vector<std::vector<double>> random_scores(Rng& rng, std::size_t n, bool integers) {
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, kNegInf));
  for (std::size_t h = 0; h <= n; ++h) {
    for (std::size_t d = 1; d <= n; ++d) {
      if (h != d) s[h][d] = integers ? static_cast<double>(rng.below(4)) : rng.uniform(-5.0, 5.0);
    }
  }
  return s;
}

TEST(Mst, SingleWord) {
  EXPECT_EQ(mst_decode(masked({{0, 1}, {0, 0}})), (std::vector<int>{0}));
}

TEST(Mst, TwoWordExample) {
  const Tensor s = masked({{0, 5, -1}, {0, 0, 3}, {0, -1, 0}});
  const auto heads = mst_decode(s);
  EXPECT_EQ(heads, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(tree_score(s, heads), 8.0);
}

TEST(Mst, EnforcesSingleRoot) {
  // Greedy would attach both words to the root.
  const Tensor s = masked({{0, 10, 10}, {0, 0, 1}, {0, 1, 0}});
  const auto heads = mst_decode(s);
  EXPECT_EQ(std::count(heads.begin(), heads.end(), 0), 1);
  EXPECT_DOUBLE_EQ(tree_score(s, heads), 11.0);
}

TEST(Mst, EmptyIsDomainError) {
  EXPECT_THROW(mst_decode(Tensor(Shape{1, 1})), DomainError);
  EXPECT_THROW(mst_decode(Tensor(Shape{2, 3})), ShapeError);
}

TEST(Mst, MatchesBruteForce) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const auto s = random_scores(rng, n, false);
    const auto oracle = testing::brute_mst(s);
    const Tensor t = masked(s);
    const auto heads = mst_decode(t);
    std::vector<int> full{0};
    full.insert(full.end(), heads.begin(), heads.end());
    ASSERT_TRUE(testing::is_single_root_tree(full));
    ASSERT_NEAR(tree_score(t, heads), oracle.best, 1e-9);
    ASSERT_EQ(full, oracle.heads);
  }
}

TEST(Mst, TiedScoresStillOptimal) {
  Rng rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const auto s = random_scores(rng, n, true);
    const auto heads = mst_decode(masked(s));
    std::vector<int> full{0};
    full.insert(full.end(), heads.begin(), heads.end());
    ASSERT_TRUE(testing::is_single_root_tree(full));
    ASSERT_DOUBLE_EQ(tree_score(masked(s), heads), testing::brute_mst(s).best);
  }
}

TEST(Mst, ShiftInvariant) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    auto s = random_scores(rng, n, false);
    const auto before = mst_decode(masked(s));
    for (auto& row : s) {
      for (double& v : row) v += 7.25;
    }
    EXPECT_EQ(mst_decode(masked(s)), before);
  }
}

TEST(Mst, AtLeastGreedyWhenGreedyIsTree) {
  Rng rng(24);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const auto s = random_scores(rng, n, false);
    const Tensor t = masked(s);
    std::vector<int> greedy{0};
    for (std::size_t d = 1; d <= n; ++d) {
      int best = 0;
      for (std::size_t h = 1; h <= n; ++h) {
        if (t.at(h, d) > t.at(best, d)) best = static_cast<int>(h);
      }
      greedy.push_back(best);
    }
    if (!testing::is_single_root_tree(greedy)) continue;
    const std::vector<int> g(greedy.begin() + 1, greedy.end());
    EXPECT_GE(tree_score(t, mst_decode(t)), tree_score(t, g) - 1e-12);
  }
}

ParserModel tiny_parser(std::uint64_t seed) {
  ParserConfig cfg;
  cfg.word_dim = 3;
  cfg.tag_dim = 2;
  cfg.hidden_dim = 3;
  cfg.arc_dim = 3;
  cfg.rel_dim = 2;
  Vocab words(true), upos(true), xpos(true), deprels(false);
  for (const Word& w : testing::three_words().words) {
    words.add(w.form);
    upos.add(w.upos);
    xpos.add(w.xpos);
    deprels.add(w.deprel);
  }
  ParserModel m(cfg, words, upos, xpos, deprels);
  Rng rng(seed);
  m.init(rng);
  return m;
}

TEST(Parser, GradientsMatchFiniteDifferences) {
  ParserModel m = tiny_parser(1);
  const Sentence s = testing::three_words();
  const auto r = testing::check_gradients(m.parameters(), [&](Graph& g) { return parser_loss(g, m, s); });
  EXPECT_GT(r.checked, 0u);
  EXPECT_LT(r.worst_relative, 1e-4) << r.worst_param;
}

TEST(Parser, ScoreMasking) {
  const ParserModel m = tiny_parser(2);
  const ArcScores one = score_arcs(m, {"She"}, {"PRON"}, {"PRP"});
  EXPECT_TRUE(std::isfinite(one.arcs.at(0, 1)));
  EXPECT_EQ(one.arcs.at(1, 1), kNegInf);
  EXPECT_EQ(one.arcs.at(0, 0), kNegInf);
  EXPECT_EQ(one.arcs.at(1, 0), kNegInf);
  const ArcScores a = score_arcs(m, {"She", "did", "go"}, {"PRON", "AUX", "X"}, {"PRP", "VBD", "X"});
  const ArcScores b = score_arcs(m, {"She", "did", "go"}, {"PRON", "AUX", "X"}, {"PRP", "VBD", "X"});
  EXPECT_EQ(a.arcs.values(), b.arcs.values());
  EXPECT_THROW(score_arcs(m, {"a", "b"}, {"X"}, {"X", "X"}), ShapeError);
}

TEST(Parser, BiasOnlyScoresUniform) {
  ParserModel m = tiny_parser(3);
  m.arc_scorer.u.value.fill(0.0);
  m.arc_scorer.w.value.fill(0.0);
  m.arc_scorer.b.value[0] = 0.75;
  const ArcScores s = score_arcs(m, {"a", "b", "c"}, {"X", "X", "X"}, {"X", "X", "X"});
  for (std::size_t h = 0; h < 4; ++h) {
    for (std::size_t d = 0; d < 4; ++d) {
      if (d == 0 || h == d) {
        EXPECT_EQ(s.arcs.at(h, d), kNegInf);
      } else {
        EXPECT_DOUBLE_EQ(s.arcs.at(h, d), 0.75);
      }
    }
  }
}

TEST(Parser, SingleWordTakesBestRootRelation) {
  const ParserModel m = tiny_parser(4);
  const DependencyTree t = parse_sentence(m, {"She"}, {"PRON"}, {"PRP"});
  EXPECT_EQ(t.heads, (std::vector<int>{0}));
  const ArcScores s = score_arcs(m, {"She"}, {"PRON"}, {"PRP"});
  const auto& rel = s.relations[0 * 2 + 1];
  EXPECT_EQ(t.deprels[0], m.deprels.item(static_cast<std::size_t>(
                              std::max_element(rel.values().begin(), rel.values().end()) - rel.values().begin())));
}

TEST(Parser, FuzzedOutputIsTree) {
  const ParserModel m = tiny_parser(5);
  Rng rng(6);
  const std::vector<std::string> vocab = {"She", "did", "n't", "zzz", "The"};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<std::string> w, u, x;
    for (std::size_t i = 0; i < n; ++i) {
      w.push_back(vocab[rng.below(vocab.size())]);
      u.push_back("PRON");
      x.push_back("?");
    }
    const DependencyTree t = parse_sentence(m, w, u, x);
    std::vector<int> full{0};
    full.insert(full.end(), t.heads.begin(), t.heads.end());
    ASSERT_TRUE(testing::is_single_root_tree(full));
    ASSERT_EQ(t.deprels.size(), n);
  }
}

TEST(Parser, RejectsCyclicGold) {
  Treebank tb = testing::tiny_treebank();
  tb.sentences[0].words[2].head = 1;
  tb.sentences[0].words[0].head = 3;
  EXPECT_THROW(train_parser(tb, {}, 1), DataError);
}

TEST(Parser, OverfitsAndIsDeterministic) {
  const Treebank tb = testing::tiny_treebank();
  ParserConfig cfg;
  cfg.epochs = 40;
  ParserModel a = train_parser(tb, cfg, 3);
  for (const Sentence& s : tb.sentences) {
    std::vector<std::string> w, u, x;
    for (const Word& word : s.words) {
      w.push_back(word.form);
      u.push_back(word.upos);
      x.push_back(word.xpos);
    }
    const DependencyTree t = parse_sentence(a, w, u, x);
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      EXPECT_EQ(t.heads[i], s.words[i].head);
      EXPECT_EQ(t.deprels[i], s.words[i].deprel);
    }
  }
  ParserModel b = train_parser(tb, cfg, 3);
  const ParamList pa = a.parameters(), pb = b.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i].second->value.values(), pb[i].second->value.values());
}

}  // namespace
}  // namespace biopipe
