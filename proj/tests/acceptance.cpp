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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <memory>
#include <string>
#include <vector>

#include "biopipe/ablation.hpp"
#include "biopipe/bioes.hpp"
#include "biopipe/core/crf.hpp"
#include "biopipe/corpus.hpp"
#include "biopipe/evaluation.hpp"
#include "biopipe/package.hpp"
#include "biopipe/pipeline.hpp"
#include "biopipe/unicode.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "scorer_fixtures.hpp"

namespace biopipe {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kData = BIOPIPE_DATA_DIR;
constexpr std::uint64_t kSeed = 1;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------- toy models

Treebank load_split(const std::string& domain, const std::string& split) {
  return load_treebank(kData / domain / (split + ".conllu"), kData / domain / (split + ".txt"));
}

ModelPackage train_treebank_package(const Treebank& tb, const std::string& name) {
  ModelPackage pkg;
  pkg.name = name;
  SegmenterConfig seg;
  seg.epochs = 80;
  pkg.tokenize = train_segmenter(tb, seg, kSeed);
  pkg.pos = train_tagger(tb, TaggerConfig{}, kSeed);
  pkg.lemma = train_lemmatizer(tb, LemmatizerConfig{}, kSeed);
  pkg.depparse = train_parser(tb, ParserConfig{}, kSeed);
  return pkg;
}

Pipeline as_pipeline(const ModelPackage& pkg) {
  return pipeline_from_package(std::make_shared<const ModelPackage>(pkg), PipelineConfig{pkg.name, {}, {}, false});
}

MetricReport end_to_end(const Pipeline& p, const Treebank& gold) {
  const Document g = document_from_treebank(gold);
  return evaluate_documents(annotate(p, g.text), g);
}

double pct(const MetricReport& r, const char* row) { return 100.0 * r.at(row).f1(); }

struct Toys {
  ModelPackage bio, general, combined;
  CharLmPair lms;
  NerModel ner;
  std::vector<TaggedSentence> ner_train, ner_dev;
  double overfit_seconds = 0;
};

Toys& toys() {
  static Toys t;
  return t;
}

// ---------------------------------------------------------------- criteria

Outcome crf_oracle() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  int bad_path = 0, bad_z = 0;
  double worst_z = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = 1 + rng.below(6), K = 1 + rng.below(4);
    CrfParams p(K);
    for (Parameter* q : {&p.transitions, &p.start, &p.stop}) {
      for (double& v : q->value.data()) v = rng.uniform(-2, 2);
    }
    Tensor e(Shape{L, K});
    for (double& v : e.data()) v = rng.uniform(-3, 3);
    const auto oracle = testing::brute_crf(e, p);
    const double dz = std::abs(crf_log_partition(e, p) - oracle.log_partition);
    worst_z = std::max(worst_z, dz);
    if (dz > 1e-6) ++bad_z;
    if (crf_viterbi(e, p).path != oracle.best_path) ++bad_path;
  }
  const double secs = seconds_since(t0);
  return {bad_path == 0 && bad_z == 0 && secs < 10,
          "200 instances, path mismatches=" + std::to_string(bad_path) + ", max |dlogZ|=" + fmt("%.2e", worst_z) +
              ", " + fmt("%.2f", secs) + " s"};
}

Outcome mst_oracle() {
  const auto t0 = Clock::now();
  Rng rng(21);
  int instances = 0, bad = 0;
  while (instances < 200) {
    const std::size_t n = 1 + rng.below(5);
    std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, kNegInf));
    for (std::size_t h = 0; h <= n; ++h) {
      for (std::size_t d = 1; d <= n; ++d) {
        if (h != d && !rng.bernoulli(0.2)) s[h][d] = rng.uniform(-5, 5);
      }
    }
    const auto oracle = testing::brute_mst(s);
    if (!std::isfinite(oracle.best)) continue;
    ++instances;
    Tensor t(Shape{n + 1, n + 1}, kNegInf);
    for (std::size_t h = 0; h <= n; ++h) {
      for (std::size_t d = 1; d <= n; ++d) t.at(h, d) = s[h][d];
    }
    const auto heads = mst_decode(t);
    std::vector<int> full{0};
    full.insert(full.end(), heads.begin(), heads.end());
    if (!testing::is_single_root_tree(full) || std::abs(tree_score(t, heads) - oracle.best) > 1e-9) ++bad;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 30,
          "200 masked instances, mismatches=" + std::to_string(bad) + ", " + fmt("%.2f", secs) + " s"};
}

CharLm small_lm(Direction d, std::uint64_t seed, const std::u32string& alphabet) {
  CharLmConfig cfg;
  cfg.char_dim = 3;
  cfg.hidden_dim = 3;
  CharVocab chars;
  for (const char32_t c : alphabet) chars.add(c);
  CharLm m(d, cfg, chars);
  Rng rng(seed);
  m.init(rng);
  return m;
}

Outcome gradients() {
  const auto t0 = Clock::now();
  const Sentence s = testing::three_words();
  std::vector<std::pair<std::string, testing::GradCheckResult>> results;
  Rng rng(3);

  {
    SegmenterConfig cfg;
    cfg.embedding_dim = 3;
    cfg.hidden_dim = 3;
    const std::u32string text = U"She didn't";
    CharVocab chars;
    for (const char32_t c : text) chars.add(c);
    SegmenterModel m(cfg, chars);
    m.init(rng);
    const auto labels = make_char_labels(text, {{Span{0, 3}, Span{4, 7}, Span{7, 10}}});
    results.emplace_back("segmenter", testing::check_gradients(m.parameters(), [&](Graph& g) {
                           return segmenter_loss(g, m, text, labels);
                         }));
  }
  {
    TaggerConfig cfg;
    cfg.word_dim = 3;
    cfg.upos_dim = 2;
    cfg.hidden_dim = 3;
    Vocab words(true), upos(false), xpos(false);
    for (const Word& w : s.words) {
      words.add(w.form);
      upos.add(w.upos);
      xpos.add(w.xpos);
    }
    TaggerModel m(cfg, words, upos, xpos);
    m.init(rng);
    results.emplace_back("tagger", testing::check_gradients(m.parameters(), [&](Graph& g) {
                           return tagger_loss(g, m, s);
                         }));
  }
  {
    LemmatizerConfig cfg;
    cfg.char_dim = 3;
    cfg.upos_dim = 2;
    cfg.encoder_dim = 2;
    cfg.decoder_dim = 3;
    cfg.attention_dim = 2;
    CharVocab chars;
    for (const char32_t c : std::u32string(U"Shedion'tsh")) chars.add(c);
    Vocab upos(true);
    for (const Word& w : s.words) upos.add(w.upos);
    LemmaSeq2Seq m(cfg, chars, upos);
    m.init(rng);
    testing::GradCheckResult worst;
    for (const Word& w : s.words) {
      const auto r = testing::check_gradients(m.parameters(), [&](Graph& g) {
        return lemmatizer_loss(g, m, w.form, w.upos, w.lemma);
      });
      worst.checked += r.checked;
      if (r.worst_relative >= worst.worst_relative) {
        worst.worst_relative = r.worst_relative;
        worst.worst_param = r.worst_param;
      }
    }
    results.emplace_back("lemmatizer", worst);
  }
  {
    ParserConfig cfg;
    cfg.word_dim = 3;
    cfg.tag_dim = 2;
    cfg.hidden_dim = 3;
    cfg.arc_dim = 3;
    cfg.rel_dim = 2;
    Vocab words(true), upos(true), xpos(true), deprels(false);
    for (const Word& w : s.words) {
      words.add(w.form);
      upos.add(w.upos);
      xpos.add(w.xpos);
      deprels.add(w.deprel);
    }
    ParserModel m(cfg, words, upos, xpos, deprels);
    m.init(rng);
    results.emplace_back("parser", testing::check_gradients(m.parameters(), [&](Graph& g) {
                           return parser_loss(g, m, s);
                         }));
  }
  {
    CharLm m = small_lm(Direction::kForward, 4, U"She didn't go\n");
    const Tensor h0 = Tensor::vector({0.1, -0.2, 0.3}), c0 = Tensor::vector({0.5, 0.0, -0.4});
    results.emplace_back("charlm", testing::check_gradients(m.parameters(), [&](Graph& g) {
                           Tensor h = h0, c = c0;
                           return charlm_loss(g, m, U"She didn't", h, c);
                         }));
  }
  for (const NerMode mode : {NerMode::kCharLm, NerMode::kBaseline}) {
    NerConfig cfg;
    cfg.word_dim = 2;
    cfg.hidden_dim = 2;
    cfg.char_dim = 2;
    cfg.char_hidden_dim = 2;
    Vocab words(true);
    for (const Word& w : s.words) words.add(w.form);
    CharVocab chars;
    for (const char32_t c : std::u32string(U"She didn't")) chars.add(c);
    NerModel m(cfg, mode, words, bioes_inventory({"problem"}), small_lm(Direction::kForward, 5, U"She didn't"),
               small_lm(Direction::kBackward, 6, U"She didn't"), chars);
    m.init(rng);
    const TaggedSentence ts{{"She", "did", "n't"}, {"S-problem", "O", "O"}};
    results.emplace_back(mode == NerMode::kCharLm ? "ner" : "ner-baseline",
                         testing::check_gradients(m.parameters(), [&](Graph& g) { return ner_loss(g, m, ts); }));
  }

  bool ok = true;
  std::string detail;
  for (const auto& [name, r] : results) {
    ok = ok && r.checked > 0 && r.worst_relative < 1e-4;
    detail += name + "=" + fmt("%.1e", r.worst_relative) + " ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 300, detail + fmt("(%.1f s)", secs)};
}

Outcome overfit() {
  const auto t0 = Clock::now();
  Toys& t = toys();
  const Treebank train = load_split("bio", "train");
  t.bio = train_treebank_package(train, "toy-craft");
  const MetricReport r = end_to_end(as_pipeline(t.bio), train);

  std::vector<std::string> lines;
  {
    std::istringstream in(read_file(kData / "charlm" / "clinical.txt"));
    for (std::string line; std::getline(in, line);) lines.push_back(line);
  }
  std::string text;
  for (const std::string& l : filter_corpus(lines)) text += l + "\n";
  t.lms = CharLmPair{train_charlm(text, Direction::kForward, CharLmConfig{}, kSeed),
                     train_charlm(text, Direction::kBackward, CharLmConfig{}, kSeed + 1)};
  t.ner_train = read_ner_corpus(read_file(kData / "ner" / "train.bioes"));
  t.ner_dev = read_ner_corpus(read_file(kData / "ner" / "dev.bioes"));
  t.ner = train_ner(t.ner_train, t.lms.forward, t.lms.backward, NerConfig{}, kSeed);
  const double ner_f1 = 100 * ner_score(t.ner, t.ner_train).f1();

  const double tokens = pct(r, "Tokens"), upos = pct(r, "UPOS"), lemma = pct(r, "Lemmas"), uas = pct(r, "UAS");
  t.overfit_seconds = seconds_since(t0);
  const bool ok = tokens >= 99 && upos >= 99 && lemma >= 99 && uas >= 95 && ner_f1 >= 95 && t.overfit_seconds < 900;
  return {ok, "tokens=" + fmt("%.2f", tokens) + " upos=" + fmt("%.2f", upos) + " lemma=" + fmt("%.2f", lemma) +
                  " uas=" + fmt("%.2f", uas) + " ner=" + fmt("%.2f", ner_f1) + fmt(" (%.0f s)", t.overfit_seconds)};
}

Outcome scorer_fixtures() {
  using testing::conllu_document;
  const auto two = [](double v) { return std::round(v * 100) / 100; };
  const Document gold = conllu_document(testing::kGoldWalk);
  const double token_f1 = two(pct(evaluate_documents(conllu_document(testing::kSplitWalk), gold), "Tokens"));
  const double uas = two(pct(evaluate_documents(conllu_document(testing::kWrongHeadWalk), gold), "UAS"));

  Document gold_ents = gold, sys_ents = gold;
  gold_ents.entities = {Entity{"She", "person", Span{0, 3}, 0, 0, 1}, Entity{"home", "place", Span{11, 15}, 0, 2, 3}};
  sys_ents.entities = {Entity{"She", "person", Span{0, 3}, 0, 0, 1}, Entity{"today", "place", Span{16, 21}, 0, 3, 4}};
  const double ent = entity_f1(sys_ents, gold_ents).f1();

  const MetricReport perfect = evaluate_documents(gold_ents, gold_ents);
  bool all_100 = perfect.rows.size() >= 10;
  for (const auto& [name, s] : perfect.rows) {
    all_100 = all_100 && two(100 * s.precision()) == 100.0 && two(100 * s.recall()) == 100.0 &&
              two(100 * s.f1()) == 100.0;
  }
  const bool ok = token_f1 == 66.67 && uas == 75.0 && two(ent) == 0.5 && all_100;
  return {ok, "token F1=" + fmt("%.2f", token_f1) + " UAS=" + fmt("%.2f", uas) + " entity F1=" + fmt("%.2f", ent) +
                  " perfect rows=" + std::to_string(perfect.rows.size()) + (all_100 ? " all 100.00" : " NOT all 100")};
}

Outcome charlm_vs_baseline() {
  const Toys& t = toys();
  if (t.ner_train.empty()) return {false, "overfit stage did not run"};
  const auto r = charlm_ablation(t.ner_train, t.ner_dev, t.lms.forward, t.lms.backward, NerConfig{}, kSeed);
  const double a = 100 * r.charlm.f1(), b = 100 * r.baseline.f1();
  return {a >= b, "dev F1 charlm=" + fmt("%.2f", a) + " baseline=" + fmt("%.2f", b)};
}

Outcome combination() {
  Toys& t = toys();
  if (!t.bio.tokenize) return {false, "overfit stage did not run"};
  const Treebank gen_train = load_split("general", "train");
  const Treebank bio_train = load_split("bio", "train");
  t.general = train_treebank_package(gen_train, "toy-ewt");
  t.combined = train_treebank_package(combine_treebanks(gen_train, bio_train), "toy-combined");
  const Treebank gen_test = load_split("general", "test"), bio_test = load_split("bio", "test");
  const Pipeline bio = as_pipeline(t.bio), gen = as_pipeline(t.general), comb = as_pipeline(t.combined);

  const double bio_ood = pct(end_to_end(bio, gen_test), "Tokens");
  const double gen_ood = pct(end_to_end(gen, bio_test), "Tokens");
  const MetricReport comb_gen = end_to_end(comb, gen_test), comb_bio = end_to_end(comb, bio_test);
  const double gen_las = pct(end_to_end(gen, gen_test), "LAS"), bio_las = pct(end_to_end(bio, bio_test), "LAS");

  // Out of domain for the general model is the bio test set and vice versa.
  const bool ood = pct(comb_bio, "Tokens") >= gen_ood + 5 && pct(comb_gen, "Tokens") >= bio_ood + 5;
  const bool las = std::abs(pct(comb_gen, "LAS") - gen_las) <= 3 && std::abs(pct(comb_bio, "LAS") - bio_las) <= 3;
  return {ood && las, "tokens on bio: combined=" + fmt("%.2f", pct(comb_bio, "Tokens")) + " general=" +
                          fmt("%.2f", gen_ood) + "; tokens on general: combined=" +
                          fmt("%.2f", pct(comb_gen, "Tokens")) + " bio=" + fmt("%.2f", bio_ood) +
                          "; LAS general " + fmt("%.2f", pct(comb_gen, "LAS")) + " vs " + fmt("%.2f", gen_las) +
                          ", bio " + fmt("%.2f", pct(comb_bio, "LAS")) + " vs " + fmt("%.2f", bio_las)};
}

Outcome silver() {
  const Toys& t = toys();
  if (!t.combined.tokenize) return {false, "combination stage did not run"};
  const NoteCollection notes = read_notes(kData / "notes");
  if (notes.notes.size() != 8) return {false, "expected 8 notes, found " + std::to_string(notes.notes.size())};
  const Pipeline p = as_pipeline(t.combined);
  const auto a = build_silver_splits(p, notes, {6, 1, 1}, 7);
  const auto b = build_silver_splits(p, notes, {6, 1, 1}, 7);
  bool valid = true;
  for (const Treebank& tb : a) {
    const std::string bytes = write_conllu(tb);
    valid = valid && write_conllu(read_conllu(bytes)) == bytes && !tb.sentences.empty();
    for (const Sentence& s : tb.sentences) valid = valid && tree_error(s).empty();
  }
  const fs::path dir = fs::temp_directory_path() / "biopipe_acceptance_silver";
  fs::create_directories(dir);
  write_file(dir / "train.conllu", write_conllu(a[0]));
  write_file(dir / "train.txt", *a[0].raw_text);
  const Treebank reread = load_treebank(dir / "train.conllu", dir / "train.txt");

  SegmenterConfig seg;
  seg.epochs = 5;
  TaggerConfig tag;
  tag.epochs = 5;
  LemmatizerConfig lem;
  lem.epochs = 5;
  ParserConfig par;
  par.epochs = 5;
  ModelPackage fresh;
  fresh.name = "silver";
  fresh.tokenize = train_segmenter(reread, seg, kSeed);
  fresh.pos = train_tagger(reread, tag, kSeed);
  fresh.lemma = train_lemmatizer(reread, lem, kSeed);
  fresh.depparse = train_parser(reread, par, kSeed);
  const Document dev = annotate(as_pipeline(fresh), *a[1].raw_text);
  fs::remove_all(dir);
  const bool deterministic = a == b;
  return {valid && deterministic && !dev.sentences.empty(),
          "sentences train/dev/test=" + std::to_string(a[0].sentences.size()) + "/" +
              std::to_string(a[1].sentences.size()) + "/" + std::to_string(a[2].sentences.size()) +
              (deterministic ? ", deterministic" : ", NOT deterministic") + (valid ? ", valid" : ", INVALID") +
              ", fresh pipeline annotated " + std::to_string(dev.num_words()) + " dev words"};
}

std::string random_text(Rng& rng) {
  static const std::vector<std::string> words = {"The",   "up-regulation", "of",  "TP53",      "induced", "cells",
                                                 "She",   "didn't",        "go",  "patient",   "sore",    "throat",
                                                 "Cepacol", "lozenges",    "é",   "well-known", "x",      "42"};
  std::string s;
  const std::size_t n = rng.below(14);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += rng.bernoulli(0.1) ? "\n\n" : " ";
    s += words[rng.below(words.size())];
    if (rng.bernoulli(0.2)) s += ".";
  }
  return s;
}

Outcome round_trips() {
  const Toys& t = toys();
  if (!t.bio.tokenize) return {false, "overfit stage did not run"};
  int conllu_bad = 0, bioes_bad = 0, package_bad = 0;
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string bytes = write_conllu(testing::random_treebank(rng));
    if (write_conllu(read_conllu(bytes)) != bytes) ++conllu_bad;
  }
  const std::vector<std::string> types = {"problem", "test", "treatment"};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng.below(12);
    std::vector<TaggedSpan> spans;
    for (std::size_t i = 0; i < n;) {
      if (rng.bernoulli(0.4)) {
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(3, n - i));
        spans.push_back({i, i + len, types[rng.below(types.size())], ""});
        i += len;
      } else {
        ++i;
      }
    }
    const auto tags = encode_bioes(spans, n);
    if (decode_bioes(tags) != spans || encode_bioes(decode_bioes(tags), n) != tags) ++bioes_bad;
  }

  ModelPackage pkg = t.bio;
  pkg.charlm = t.lms;
  pkg.ner = t.ner;
  const fs::path dir = fs::temp_directory_path() / "biopipe_acceptance_package";
  fs::remove_all(dir);
  save_package(pkg, dir);
  const ModelPackage loaded = load_package(dir);
  fs::remove_all(dir);
  const Pipeline a = as_pipeline(pkg), b = as_pipeline(loaded);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string text = random_text(rng);
    if (!(annotate(a, text) == annotate(b, text))) ++package_bad;
  }
  return {conllu_bad == 0 && bioes_bad == 0 && package_bad == 0,
          "1000 cases each; mismatches conllu=" + std::to_string(conllu_bad) + " bioes=" +
              std::to_string(bioes_bad) + " package=" + std::to_string(package_bad)};
}

Outcome benchmark() {
  const Toys& t = toys();
  if (!t.bio.tokenize) return {false, "overfit stage did not run"};
  const Pipeline p = as_pipeline(t.bio);
  const std::string corpus = load_split("bio", "test").raw_text.value_or("");
  std::size_t reps = 1;
  const auto once = [&] {
    std::size_t n = 0;
    for (std::size_t i = 0; i < reps; ++i) n += annotate(p, corpus).num_words();
    return n;
  };
  once();
  double probe = 1e9;
  for (int i = 0; i < 3; ++i) {
    const auto t0 = Clock::now();
    once();
    probe = std::min(probe, seconds_since(t0));
  }
  reps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(1.0 / std::max(probe, 1e-6))));
  // Repetitions of the two runs are interleaved.
  BenchmarkRun base{"pipeline", 0, {}}, again{"pipeline-rerun", 0, {}};
  for (int i = 0; i < 3; ++i) {
    for (BenchmarkRun* r : {&base, &again}) {
      const BenchmarkRun one = run_benchmark(r->name, once, 1);
      r->tokens = one.tokens;
      r->seconds.push_back(one.seconds.front());
    }
  }
  const double ratio = relative_runtime(again, base);
  const std::string report = benchmark_report({base, again}, "pipeline");
  const bool ok = base.seconds.size() == 3 && std::abs(ratio - 1.0) <= 0.05 &&
                  report.find("pipeline.relative=1.00") != std::string::npos;
  return {ok, "self-relative ratio=" + fmt("%.3f", ratio) + " over 3 runs of " + fmt("%.2f", base.mean_seconds()) +
                  " s"};
}

}  // namespace
}  // namespace biopipe

int main() {
  using namespace biopipe;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"CRF oracle suite", crf_oracle},
      {"MST oracle suite", mst_oracle},
      {"Gradient suite", gradients},
      {"Overfit suite", overfit},
      {"Scorer fixtures", scorer_fixtures},
      {"CharLM ablation direction", charlm_vs_baseline},
      {"Treebank combination direction", combination},
      {"Silver treebank harness", silver},
      {"Round trips", round_trips},
      {"Benchmark harness", benchmark},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
