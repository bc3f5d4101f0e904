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

#include "biopipe/parser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biopipe/core/layers.hpp"
#include "biopipe/error.hpp"

namespace biopipe {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Matrix = std::vector<std::vector<double>>;

// Chu-Liu/Edmonds on node 0 as root with no degree constraint. Returns the
// parent of every node (parent[0] = -1).
std::vector<int> chu_liu_edmonds(const Matrix& s) {
  const int m = static_cast<int>(s.size());
  std::vector<int> parent(m, -1);
  for (int v = 1; v < m; ++v) {
    double best = kNegInf;
    for (int u = 0; u < m; ++u) {
      if (u != v && s[u][v] > best) {
        best = s[u][v];
        parent[v] = u;
      }
    }
    if (parent[v] < 0) throw DomainError("mst_decode: node without a finite incoming arc");
  }
  // Find a cycle.
  std::vector<int> mark(m, -1);
  std::vector<int> cycle;
  for (int start = 1; start < m && cycle.empty(); ++start) {
    int v = start;
    while (v > 0 && mark[v] < 0) {
      mark[v] = start;
      v = parent[v];
    }
    if (v > 0 && mark[v] == start) {
      int u = v;
      do {
        cycle.push_back(u);
        u = parent[u];
      } while (u != v);
    }
  }
  if (cycle.empty()) return parent;

  std::vector<bool> in_cycle(m, false);
  for (const int v : cycle) in_cycle[v] = true;
  // New numbering: non-cycle nodes keep their order, the cycle becomes the last node.
  std::vector<int> to_new(m, -1);
  std::vector<int> to_old;
  for (int v = 0; v < m; ++v) {
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  }
  const int c = static_cast<int>(to_old.size());
  const int mm = c + 1;
  Matrix t(mm, std::vector<double>(mm, kNegInf));
  std::vector<int> enter_at(mm, -1);  // for arcs u -> cycle: which cycle node is entered
  std::vector<int> leave_from(mm, -1);  // for arcs cycle -> v: which cycle node leaves
  for (int a = 0; a < c; ++a) {
    for (int b = 0; b < c; ++b) {
      if (a != b) t[a][b] = s[to_old[a]][to_old[b]];
    }
  }
  for (int a = 0; a < c; ++a) {
    const int u = to_old[a];
    for (const int v : cycle) {
      if (s[u][v] == kNegInf) continue;
      const double gain = s[u][v] - s[parent[v]][v];
      if (gain > t[a][c] || (gain == t[a][c] && v < enter_at[a])) {
        t[a][c] = gain;
        enter_at[a] = v;
      }
    }
  }
  for (int b = 1; b < c; ++b) {
    const int v = to_old[b];
    for (const int u : cycle) {
      if (s[u][v] > t[c][b] || (s[u][v] == t[c][b] && s[u][v] != kNegInf && u < leave_from[b])) {
        t[c][b] = s[u][v];
        leave_from[b] = u;
      }
    }
  }
  const std::vector<int> sub = chu_liu_edmonds(t);
  std::vector<int> out = parent;  // cycle nodes keep cycle parents by default
  for (int b = 1; b < c; ++b) {
    out[to_old[b]] = sub[b] == c ? leave_from[b] : to_old[sub[b]];
  }
  const int from = sub[c];
  out[enter_at[from]] = to_old[from];
  return out;
}

}  // namespace

double tree_score(const Tensor& scores, const std::vector<int>& heads) {
  double total = 0;
  for (std::size_t d = 0; d < heads.size(); ++d) total += scores.at(static_cast<std::size_t>(heads[d]), d + 1);
  return total;
}

std::vector<int> mst_decode(const Tensor& scores) {
  if (scores.shape().rank() != 2 || scores.shape()[0] != scores.shape()[1]) {
    throw ShapeError("mst_decode: expected a square matrix, got " + scores.shape().str());
  }
  const std::size_t m = scores.shape()[0];
  if (m < 2) throw DomainError("mst_decode: empty sentence");
  const std::size_t n = m - 1;
  Matrix s(m, std::vector<double>(m, kNegInf));
  for (std::size_t h = 0; h < m; ++h) {
    for (std::size_t d = 1; d < m; ++d) {
      if (h != d && !std::isnan(scores.at(h, d))) s[h][d] = scores.at(h, d);
    }
  }
  std::vector<int> best;
  double best_total = kNegInf;
  for (std::size_t r = 1; r <= n; ++r) {
    if (s[0][r] == kNegInf) continue;
    Matrix t = s;
    for (std::size_t d = 1; d < m; ++d) {
      if (d != r) t[0][d] = kNegInf;
    }
    std::vector<int> parent;
    try {
      parent = chu_liu_edmonds(t);
    } catch (const DomainError&) {
      continue;
    }
    std::vector<int> heads(parent.begin() + 1, parent.end());
    const double total = tree_score(scores, heads);
    if (best.empty() || total > best_total || (total == best_total && heads < best)) {
      best = std::move(heads);
      best_total = total;
    }
  }
  if (best.empty()) throw DomainError("mst_decode: no finite single-root tree");
  return best;
}

ParserModel::ParserModel(ParserConfig cfg, Vocab word_vocab, Vocab upos_vocab, Vocab xpos_vocab,
                         Vocab deprel_vocab)
    : config(cfg),
      words(std::move(word_vocab)),
      upos(std::move(upos_vocab)),
      xpos(std::move(xpos_vocab)),
      deprels(std::move(deprel_vocab)),
      word_embedding(words.size(), cfg.word_dim),
      upos_embedding(upos.size(), cfg.tag_dim),
      xpos_embedding(xpos.size(), cfg.tag_dim),
      root_input(Shape{cfg.word_dim + 2 * cfg.tag_dim}),
      forward(cfg.word_dim + 2 * cfg.tag_dim, cfg.hidden_dim),
      backward(cfg.word_dim + 2 * cfg.tag_dim, cfg.hidden_dim),
      arc_head(2 * cfg.hidden_dim, cfg.arc_dim),
      arc_dep(2 * cfg.hidden_dim, cfg.arc_dim),
      rel_head(2 * cfg.hidden_dim, cfg.rel_dim),
      rel_dep(2 * cfg.hidden_dim, cfg.rel_dim),
      arc_scorer(cfg.arc_dim, cfg.arc_dim, 1),
      rel_scorer(cfg.rel_dim, cfg.rel_dim, deprels.size()) {}

void ParserModel::init(Rng& rng) {
  word_embedding.init(rng);
  upos_embedding.init(rng);
  xpos_embedding.init(rng);
  root_input.init_uniform(rng);
  forward.init(rng);
  backward.init(rng);
  arc_head.init(rng);
  arc_dep.init(rng);
  rel_head.init(rng);
  rel_dep.init(rng);
  arc_scorer.init(rng);
  rel_scorer.init(rng);
}

ParamList ParserModel::parameters() {
  ParamList out;
  word_embedding.collect("word_embedding", out);
  upos_embedding.collect("upos_embedding", out);
  xpos_embedding.collect("xpos_embedding", out);
  out.emplace_back("root_input", &root_input);
  forward.collect("forward", out);
  backward.collect("backward", out);
  arc_head.collect("arc_head", out);
  arc_dep.collect("arc_dep", out);
  rel_head.collect("rel_head", out);
  rel_dep.collect("rel_dep", out);
  arc_scorer.collect("arc_scorer", out);
  rel_scorer.collect("rel_scorer", out);
  return out;
}

namespace {

struct Encoded {
  Var arcs;                   // (n+1) x (n+1), unmasked
  Var rel_heads;              // (n+1) x rel_dim
  Var rel_deps;               // (n+1) x rel_dim
};

Encoded encode(Graph& g, ParserModel& m, const std::vector<std::size_t>& word_ids,
               const std::vector<std::string>& upos, const std::vector<std::string>& xpos) {
  std::vector<Var> xs;
  xs.reserve(word_ids.size() + 1);
  xs.push_back(g.param(m.root_input));
  for (std::size_t i = 0; i < word_ids.size(); ++i) {
    xs.push_back(g.concat({g.lookup(m.word_embedding.table, word_ids[i]),
                           g.lookup(m.upos_embedding.table, m.upos.index(upos[i])),
                           g.lookup(m.xpos_embedding.table, m.xpos.index(xpos[i]))}));
  }
  const Var h = g.stack(run_bilstm(g, xs, m.forward, m.backward));
  Encoded e;
  e.arcs = g.biaffine_pairs(g.tanh(g.affine_rows(h, m.arc_head)), g.tanh(g.affine_rows(h, m.arc_dep)),
                            m.arc_scorer);
  e.rel_heads = g.tanh(g.affine_rows(h, m.rel_head));
  e.rel_deps = g.tanh(g.affine_rows(h, m.rel_dep));
  return e;
}

void check_lengths(const std::vector<std::string>& words, const std::vector<std::string>& upos,
                   const std::vector<std::string>& xpos) {
  if (words.size() != upos.size() || words.size() != xpos.size()) {
    throw ShapeError("parser: words, upos and xpos differ in length");
  }
  if (words.empty()) throw DomainError("parser: empty sentence");
}

}  // namespace

ArcScores score_arcs(const ParserModel& model, const std::vector<std::string>& words,
                     const std::vector<std::string>& upos, const std::vector<std::string>& xpos) {
  check_lengths(words, upos, xpos);
  ParserModel& m = unfrozen(model);
  std::vector<std::size_t> ids;
  for (const std::string& w : words) ids.push_back(m.words.index(w));
  Graph g;
  const Encoded e = encode(g, m, ids, upos, xpos);
  const std::size_t size = words.size() + 1;
  ArcScores out;
  out.arcs = g.value(e.arcs);
  for (std::size_t h = 0; h < size; ++h) {
    for (std::size_t d = 0; d < size; ++d) {
      if (d == 0 || h == d) out.arcs.at(h, d) = kNegInf;
    }
  }
  out.relations.resize(size * size);
  for (std::size_t h = 0; h < size; ++h) {
    for (std::size_t d = 1; d < size; ++d) {
      if (h == d) continue;
      out.relations[h * size + d] = g.value(g.biaffine(g.row(e.rel_heads, h), g.row(e.rel_deps, d), m.rel_scorer));
    }
  }
  return out;
}

DependencyTree parse_sentence(const ParserModel& model, const std::vector<std::string>& words,
                              const std::vector<std::string>& upos, const std::vector<std::string>& xpos) {
  const ArcScores scores = score_arcs(model, words, upos, xpos);
  DependencyTree tree;
  tree.heads = mst_decode(scores.arcs);
  const std::size_t size = words.size() + 1;
  for (std::size_t d = 1; d < size; ++d) {
    const auto h = static_cast<std::size_t>(tree.heads[d - 1]);
    tree.deprels.push_back(model.deprels.item(argmax(scores.relations[h * size + d].data())));
  }
  return tree;
}

void parse_document(const ParserModel& model, Document& doc) {
  for (Sentence& s : doc.sentences) {
    if (s.words.empty()) continue;
    std::vector<std::string> forms, upos, xpos;
    for (const Word& w : s.words) {
      forms.push_back(w.form);
      upos.push_back(w.upos);
      xpos.push_back(w.xpos);
    }
    const DependencyTree tree = parse_sentence(model, forms, upos, xpos);
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      s.words[i].head = tree.heads[i];
      s.words[i].deprel = tree.deprels[i];
    }
  }
}

Var parser_loss(Graph& g, ParserModel& model, const Sentence& sentence, Rng* dropout,
                const std::vector<std::size_t>* frequencies) {
  if (sentence.words.empty()) throw DomainError("parser_loss: empty sentence");
  std::vector<std::size_t> ids;
  std::vector<std::string> upos, xpos;
  std::vector<std::size_t> gold(1, 0);
  for (const Word& w : sentence.words) {
    std::size_t id = model.words.index(w.form);
    if (dropout && frequencies && id != 0) {
      if (dropout->bernoulli(model.config.word_dropout / (1.0 + static_cast<double>((*frequencies)[id])))) id = 0;
    }
    ids.push_back(id);
    upos.push_back(w.upos);
    xpos.push_back(w.xpos);
    if (w.head < 0) throw DataError("parser_loss: word '" + w.form + "' has no gold head");
    gold.push_back(static_cast<std::size_t>(w.head));
  }
  const Encoded e = encode(g, model, ids, upos, xpos);
  Var total = g.head_cross_entropy(e.arcs, gold);
  for (std::size_t d = 1; d < gold.size(); ++d) {
    const Var logits = g.biaffine(g.row(e.rel_heads, gold[d]), g.row(e.rel_deps, d), model.rel_scorer);
    total = g.add(total, g.cross_entropy(logits, model.deprels.index(sentence.words[d - 1].deprel)));
  }
  return total;
}

ParserModel train_parser(const Treebank& treebank, const ParserConfig& config, std::uint64_t seed) {
  if (treebank.sentences.empty()) throw DataError("train_parser: empty treebank");
  Vocab words(true), upos(true), xpos(true), deprels(false);
  std::vector<std::size_t> freq(1, 0);
  for (std::size_t i = 0; i < treebank.sentences.size(); ++i) {
    const Sentence& s = treebank.sentences[i];
    const std::string err = tree_error(s);
    if (!err.empty()) throw DataError("train_parser: sentence " + std::to_string(i + 1) + ": " + err);
    for (const Word& w : s.words) {
      const std::size_t id = words.add(w.form);
      if (id >= freq.size()) freq.resize(id + 1, 0);
      ++freq[id];
      upos.add(w.upos);
      xpos.add(w.xpos);
      deprels.add(w.deprel);
    }
  }
  Rng rng(seed);
  ParserModel model(config, std::move(words), std::move(upos), std::move(xpos), std::move(deprels));
  model.init(rng);
  ParamList params = model.parameters();
  OptimizerState opt(config.adam);
  std::vector<std::size_t> order(treebank.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t i : order) {
      zero_grads(params);
      Graph g;
      g.backward(parser_loss(g, model, treebank.sentences[i], &rng, &freq));
      adam_step(params, opt);
    }
  }
  round_to_float(params);
  return model;
}

}  // namespace biopipe
