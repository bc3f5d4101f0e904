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

#include "biopipe/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <tuple>

#include "biopipe/error.hpp"

namespace biopipe {

double Score::precision() const { return system == 0 ? 0.0 : static_cast<double>(correct) / system; }
double Score::recall() const { return gold == 0 ? 0.0 : static_cast<double>(correct) / gold; }
double Score::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

namespace {

std::vector<std::pair<Span, WordRef>> word_spans(const Document& doc, const char* side) {
  std::vector<std::pair<Span, WordRef>> out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& words = doc.sentences[s].words;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (!words[w].span) {
        throw ContractError(std::string("align_tokens: ") + side + " word '" + words[w].form + "' has no span");
      }
      out.emplace_back(*words[w].span, WordRef{s, w});
    }
  }
  return out;
}

std::set<Span> sentence_spans(const Document& doc) {
  std::set<Span> out;
  for (const Sentence& s : doc.sentences) {
    if (s.words.empty()) continue;
    out.insert(Span{s.words.front().span->start, s.words.back().span->end});
  }
  return out;
}

const Word& word_at(const Document& d, WordRef r) { return d.sentences[r.sentence].words[r.word]; }

// System head aligns to the gold head, or both attach to the root.
bool head_matches(const Document& system, const Document& gold, const Alignment& a, WordRef sys, WordRef g) {
  const Word& sw = word_at(system, sys);
  const Word& gw = word_at(gold, g);
  if (gw.head <= 0 || sw.head <= 0) return gw.head == 0 && sw.head == 0;
  const auto it = a.system_to_gold.find(WordRef{sys.sentence, static_cast<std::size_t>(sw.head - 1)});
  return it != a.system_to_gold.end() && it->second == WordRef{g.sentence, static_cast<std::size_t>(gw.head - 1)};
}

std::size_t count_words(const Document& d, const std::function<bool(const Word&)>& keep) {
  std::size_t n = 0;
  for (const Sentence& s : d.sentences) {
    for (const Word& w : s.words) n += keep(w) ? 1 : 0;
  }
  return n;
}

// Functional children of a word as (aligned gold position or none, deprel, upos).
using Child = std::tuple<long, long, std::string, std::string>;

std::vector<Child> functional_children(const Document& d, WordRef head, const Alignment* a) {
  std::vector<Child> out;
  const auto& words = d.sentences[head.sentence].words;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    if (w.head != static_cast<int>(head.word) + 1 || !is_functional_deprel(w.deprel)) continue;
    long sent = static_cast<long>(head.sentence), pos = static_cast<long>(i);
    if (a) {
      const auto it = a->system_to_gold.find(WordRef{head.sentence, i});
      if (it == a->system_to_gold.end()) {
        sent = pos = -1;
      } else {
        sent = static_cast<long>(it->second.sentence);
        pos = static_cast<long>(it->second.word);
      }
    }
    out.emplace_back(sent, pos, universal_deprel(w.deprel), w.upos);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string key_of(const std::string& name) {
  std::string k;
  for (const char c : name) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return k;
}

}  // namespace

Alignment align_tokens(const Document& system, const Document& gold) {
  if (system.text != gold.text) throw ContractError("align_tokens: system and gold raw texts differ");
  const auto sys = word_spans(system, "system");
  const auto gld = word_spans(gold, "gold");
  std::map<Span, WordRef> by_span;
  for (const auto& [span, ref] : sys) by_span.emplace(span, ref);
  Alignment a;
  a.system_words = sys.size();
  a.gold_words = gld.size();
  for (const auto& [span, ref] : gld) {
    const auto it = by_span.find(span);
    if (it == by_span.end()) continue;
    if (a.system_to_gold.emplace(it->second, ref).second) a.pairs.emplace_back(it->second, ref);
  }
  a.tokens = Score{a.pairs.size(), a.system_words, a.gold_words};
  const auto ss = sentence_spans(system), gs = sentence_spans(gold);
  std::size_t same = 0;
  for (const Span& s : ss) same += gs.count(s);
  a.sentences = Score{same, ss.size(), gs.size()};
  return a;
}

std::string universal_deprel(const std::string& deprel) { return deprel.substr(0, deprel.find(':')); }

bool is_content_deprel(const std::string& deprel) {
  static const std::set<std::string> kContent = {
      "nsubj", "obj",   "iobj",     "csubj",    "ccomp",    "xcomp",    "obl",   "vocative", "expl",    "dislocated",
      "advcl", "advmod", "discourse", "nmod",   "appos",    "nummod",   "acl",   "amod",     "conj",    "fixed",
      "flat",  "compound", "list",   "parataxis", "orphan", "goeswith", "reparandum", "root", "dep"};
  return kContent.count(universal_deprel(deprel)) > 0;
}

bool is_functional_deprel(const std::string& deprel) {
  static const std::set<std::string> kFunctional = {"aux", "cop", "mark", "det", "clf", "case", "cc"};
  return kFunctional.count(universal_deprel(deprel)) > 0;
}

const Score& MetricReport::at(const std::string& name) const {
  for (const auto& [n, s] : rows) {
    if (n == name) return s;
  }
  throw std::out_of_range("no metric named " + name);
}

bool MetricReport::has(const std::string& name) const {
  return std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.first == name; });
}

void MetricReport::set(const std::string& name, const Score& score) {
  for (auto& [n, s] : rows) {
    if (n == name) {
      s = score;
      return;
    }
  }
  rows.emplace_back(name, score);
}

std::string MetricReport::format() const {
  std::string out;
  for (const std::string& n : notes) out += "# " + n + "\n";
  for (const std::string& w : warnings) out += "# warning: " + w + "\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-11s| %9s | %9s | %9s\n", "Metric", "Precision", "Recall", "F1 Score");
  out += line;
  out += "-----------+-----------+-----------+-----------\n";
  for (const auto& [name, s] : rows) {
    std::snprintf(line, sizeof line, "%-11s| %9.2f | %9.2f | %9.2f\n", name.c_str(), 100 * s.precision(),
                  100 * s.recall(), 100 * s.f1());
    out += line;
  }
  for (const auto& [name, s] : rows) {
    const std::string k = key_of(name);
    out += k + ".precision=" + fmt2(100 * s.precision()) + "\n";
    out += k + ".recall=" + fmt2(100 * s.recall()) + "\n";
    out += k + ".f1=" + fmt2(100 * s.f1()) + "\n";
  }
  return out;
}

void score_parse(const Document& system, const Document& gold, const Alignment& a, MetricReport& report) {
  Score upos{0, a.system_words, a.gold_words}, xpos = upos, lemmas = upos, uas = upos, las = upos;
  for (const auto& [s, g] : a.pairs) {
    const Word& sw = word_at(system, s);
    const Word& gw = word_at(gold, g);
    upos.correct += sw.upos == gw.upos;
    xpos.correct += sw.xpos == gw.xpos;
    lemmas.correct += sw.lemma == gw.lemma;
    if (head_matches(system, gold, a, s, g)) {
      ++uas.correct;
      las.correct += universal_deprel(sw.deprel) == universal_deprel(gw.deprel);
    }
  }
  report.set("UPOS", upos);
  report.set("XPOS", xpos);
  report.set("Lemmas", lemmas);
  report.set("UAS", uas);
  report.set("LAS", las);
}

void score_mlas_blex(const Document& system, const Document& gold, const Alignment& a, MetricReport& report) {
  const auto content = [](const Word& w) { return is_content_deprel(w.deprel); };
  Score mlas{0, count_words(system, content), count_words(gold, content)};
  Score blex = mlas;
  if (mlas.system == 0 && mlas.gold == 0) {
    report.warnings.push_back("no content words on either side; MLAS and BLEX reported as 100");
    mlas = blex = Score{1, 1, 1};
  } else {
    for (const auto& [s, g] : a.pairs) {
      const Word& sw = word_at(system, s);
      const Word& gw = word_at(gold, g);
      if (!content(gw) || !head_matches(system, gold, a, s, g)) continue;
      if (universal_deprel(sw.deprel) != universal_deprel(gw.deprel)) continue;
      if (sw.upos == gw.upos && functional_children(system, s, &a) == functional_children(gold, g, nullptr)) {
        ++mlas.correct;
      }
      blex.correct += sw.lemma == gw.lemma;
    }
  }
  report.set("MLAS", mlas);
  report.set("BLEX", blex);
}

MetricReport evaluate_documents(const Document& system, const Document& gold) {
  const Alignment a = align_tokens(system, gold);
  MetricReport r;
  r.notes.push_back("MLAS ignores morphological features; FEATS are not predicted");
  r.notes.push_back("tokens are aligned by exact character span equality");
  r.set("Tokens", a.tokens);
  r.set("Sentences", a.sentences);
  score_parse(system, gold, a, r);
  score_mlas_blex(system, gold, a, r);
  if (!system.entities.empty() || !gold.entities.empty()) r.set("Entities", entity_f1(system, gold));
  return r;
}

Score entity_f1(const std::vector<std::vector<TaggedSpan>>& system, const std::vector<std::vector<TaggedSpan>>& gold) {
  Score s;
  const std::size_t n = std::max(system.size(), gold.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::multiset<std::tuple<std::size_t, std::size_t, std::string>> g;
    if (i < gold.size()) {
      for (const TaggedSpan& t : gold[i]) g.emplace(t.start, t.end, t.type);
    }
    s.gold += g.size();
    if (i >= system.size()) continue;
    s.system += system[i].size();
    for (const TaggedSpan& t : system[i]) {
      const auto it = g.find({t.start, t.end, t.type});
      if (it != g.end()) {
        ++s.correct;
        g.erase(it);
      }
    }
  }
  return s;
}

Score entity_f1(const Document& system, const Document& gold) {
  std::multiset<std::tuple<std::size_t, std::size_t, std::string>> g;
  for (const Entity& e : gold.entities) g.emplace(e.span.start, e.span.end, e.type);
  Score s{0, system.entities.size(), gold.entities.size()};
  for (const Entity& e : system.entities) {
    const auto it = g.find({e.span.start, e.span.end, e.type});
    if (it != g.end()) {
      ++s.correct;
      g.erase(it);
    }
  }
  return s;
}

double BenchmarkRun::mean_seconds() const {
  if (seconds.empty()) return 0.0;
  double total = 0;
  for (const double s : seconds) total += s;
  return total / static_cast<double>(seconds.size());
}

double BenchmarkRun::tokens_per_second() const {
  const double m = mean_seconds();
  return m > 0 ? static_cast<double>(tokens) / m : 0.0;
}

BenchmarkRun run_benchmark(const std::string& name, const std::function<std::size_t()>& work, std::size_t repetitions) {
  BenchmarkRun run;
  run.name = name;
  for (std::size_t i = 0; i < repetitions; ++i) {
    const auto start = std::chrono::steady_clock::now();
    run.tokens = work();
    const auto stop = std::chrono::steady_clock::now();
    run.seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return run;
}

double relative_runtime(const BenchmarkRun& run, const BenchmarkRun& baseline) {
  const double b = baseline.mean_seconds();
  return b > 0 ? run.mean_seconds() / b : 0.0;
}

std::string benchmark_report(const std::vector<BenchmarkRun>& runs, const std::string& baseline_name) {
  const auto base = std::find_if(runs.begin(), runs.end(), [&](const BenchmarkRun& r) { return r.name == baseline_name; });
  if (base == runs.end()) throw ContractError("benchmark_report: no run named " + baseline_name);
  std::string out = "# runtime averaged over repetitions, relative to " + baseline_name + "\n";
  int width = 16;
  for (const BenchmarkRun& r : runs) width = std::max(width, static_cast<int>(r.name.size()) + 1);
  char line[512];
  std::snprintf(line, sizeof line, "%-*s| %10s | %12s | %9s | %s\n", width, "System", "Tokens", "Tokens/sec",
                "Relative", "Repetitions (s)");
  out += line;
  out += std::string(width, '-') + "+------------+--------------+-----------+----------------\n";
  for (const BenchmarkRun& r : runs) {
    std::string reps;
    for (std::size_t i = 0; i < r.seconds.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.4f", i ? " " : "", r.seconds[i]);
      reps += buf;
    }
    std::snprintf(line, sizeof line, "%-*s| %10zu | %12.1f | %8.2fx | %s\n", width, r.name.c_str(), r.tokens,
                  r.tokens_per_second(), relative_runtime(r, *base), reps.c_str());
    out += line;
  }
  for (const BenchmarkRun& r : runs) {
    out += r.name + ".tokens_per_second=" + fmt2(r.tokens_per_second()) + "\n";
    out += r.name + ".relative=" + fmt2(relative_runtime(r, *base)) + "\n";
  }
  return out;
}

}  // namespace biopipe
