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

#include "biopipe/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "biopipe/bioes.hpp"
#include "biopipe/error.hpp"
#include "biopipe/random.hpp"
#include "biopipe/unicode.hpp"

namespace biopipe {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw DataError("line " + std::to_string(line) + ": " + msg);
}

std::optional<long> parse_int(std::string_view s) {
  long v = 0;
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::size_t> parse_offset(std::string_view entry, std::string_view key) {
  if (entry.substr(0, key.size()) != key) return std::nullopt;
  const auto v = parse_int(entry.substr(key.size()));
  if (!v || *v < 0) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

bool space_after_no(const Word& w) {
  return std::find(w.misc.begin(), w.misc.end(), "SpaceAfter=No") != w.misc.end();
}

void write_sentence(std::string& out, const Sentence& s) {
  for (const std::string& c : s.comments) {
    out += c;
    out += '\n';
  }
  for (const Word& w : s.words) {
    out += std::to_string(w.id);
    for (const std::string* f : {&w.form, &w.lemma, &w.upos, &w.xpos, &w.feats}) {
      out += '\t';
      out += *f;
    }
    out += '\t';
    out += w.head < 0 ? "_" : std::to_string(w.head);
    out += '\t';
    out += w.deprel;
    out += '\t';
    out += w.deps;
    out += '\t';
    std::vector<std::string> misc;
    if (w.span) {
      misc.push_back("start_char=" + std::to_string(w.span->start));
      misc.push_back("end_char=" + std::to_string(w.span->end));
    }
    misc.insert(misc.end(), w.misc.begin(), w.misc.end());
    if (misc.empty()) {
      out += '_';
    } else {
      for (std::size_t i = 0; i < misc.size(); ++i) {
        if (i) out += '|';
        out += misc[i];
      }
    }
    out += '\n';
  }
  out += '\n';
}

std::size_t max_span_end(const Treebank& tb) {
  std::size_t end = 0;
  for (const Sentence& s : tb.sentences) {
    for (const Word& w : s.words) {
      if (w.span) end = std::max(end, w.span->end);
    }
  }
  return end;
}

}  // namespace

const char* role_name(Role role) {
  switch (role) {
    case Role::kTrain: return "train";
    case Role::kDev: return "dev";
    case Role::kTest: return "test";
  }
  return "train";
}

std::size_t Treebank::num_words() const {
  std::size_t n = 0;
  for (const Sentence& s : sentences) n += s.words.size();
  return n;
}

Treebank read_conllu(std::string_view bytes, Role role) {
  Treebank tb;
  tb.role = role;
  Sentence cur;
  std::vector<std::size_t> word_lines;
  auto finish = [&](std::size_t line) {
    if (cur.words.empty()) {
      if (!cur.comments.empty()) fail(line, "comment block without words");
      return;
    }
    const long n = static_cast<long>(cur.words.size());
    for (std::size_t i = 0; i < cur.words.size(); ++i) {
      if (cur.words[i].head > n) {
        fail(word_lines[i], "head " + std::to_string(cur.words[i].head) + " out of range for sentence of " +
                                std::to_string(n) + " words");
      }
    }
    tb.sentences.push_back(std::move(cur));
    cur = Sentence{};
    word_lines.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) end = bytes.size();
    const std::string_view line = bytes.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      finish(line_no);
      continue;
    }
    if (!utf8_valid(line)) fail(line_no, "invalid UTF-8");
    if (line[0] == '#') {
      if (!cur.words.empty()) fail(line_no, "comment inside a sentence");
      cur.comments.emplace_back(line);
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 10) {
      fail(line_no, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].empty()) fail(line_no, "empty field in column " + std::to_string(c + 1));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) {
      fail(line_no, "multi-word token and empty node lines are not supported");
    }
    const auto id = parse_int(cols[0]);
    if (!id || *id != static_cast<long>(cur.words.size()) + 1) {
      fail(line_no, "word id '" + std::string(cols[0]) + "' breaks the 1..n sequence");
    }
    Word w;
    w.id = static_cast<int>(*id);
    w.form = cols[1];
    w.lemma = cols[2];
    w.upos = cols[3];
    w.xpos = cols[4];
    w.feats = cols[5];
    if (cols[6] == "_") {
      w.head = -1;
    } else {
      const auto h = parse_int(cols[6]);
      if (!h || *h < 0) fail(line_no, "head '" + std::string(cols[6]) + "' is not a word index");
      w.head = static_cast<int>(*h);
    }
    w.deprel = cols[7];
    w.deps = cols[8];
    if (cols[9] != "_") {
      std::optional<std::size_t> start, stop;
      for (const std::string_view entry : split(cols[9], '|')) {
        if (auto v = parse_offset(entry, "start_char=")) {
          start = v;
        } else if (auto e = parse_offset(entry, "end_char=")) {
          stop = e;
        } else {
          w.misc.emplace_back(entry);
        }
      }
      if (start.has_value() != stop.has_value()) fail(line_no, "start_char without end_char or vice versa");
      if (start) {
        if (*stop < *start) fail(line_no, "end_char precedes start_char");
        w.span = Span{*start, *stop};
      }
    }
    cur.words.push_back(std::move(w));
    word_lines.push_back(line_no);
  }
  finish(line_no + 1);
  return tb;
}

std::string write_conllu(const Treebank& treebank) {
  std::string out;
  for (const Sentence& s : treebank.sentences) write_sentence(out, s);
  return out;
}

std::string write_conllu(const Document& doc) {
  std::string out;
  for (const Sentence& s : doc.sentences) write_sentence(out, s);
  return out;
}

Treebank load_treebank(const std::filesystem::path& conllu, const std::optional<std::filesystem::path>& raw_text) {
  Treebank tb = read_conllu(read_file(conllu));
  if (raw_text) {
    tb.raw_text = read_file(*raw_text);
    if (!utf8_valid(*tb.raw_text)) throw DataError(raw_text->string() + ": invalid UTF-8");
    const std::size_t len = utf8_length(*tb.raw_text);
    for (const Sentence& s : tb.sentences) {
      for (const Word& w : s.words) {
        if (w.span && (w.span->end > len || substr_scalars(*tb.raw_text, *w.span) != w.form)) {
          throw DataError(conllu.string() + ": span of '" + w.form + "' does not match the raw text");
        }
      }
    }
  }
  return tb;
}

Treebank treebank_from_document(const Document& doc, Role role) {
  Treebank tb;
  tb.sentences = doc.sentences;
  tb.raw_text = doc.text;
  tb.role = role;
  return tb;
}

Document document_from_treebank(const Treebank& treebank) {
  Treebank tb = treebank;
  attach_spans(tb);
  Document doc;
  doc.text = tb.raw_text.value_or("");
  doc.sentences = std::move(tb.sentences);
  return doc;
}

bool has_spans(const Treebank& treebank) {
  for (const Sentence& s : treebank.sentences) {
    for (const Word& w : s.words) {
      if (!w.span) return false;
    }
  }
  return true;
}

void attach_spans(Treebank& tb) {
  if (has_spans(tb)) {
    if (tb.raw_text) return;
    std::u32string text(max_span_end(tb), U' ');
    for (const Sentence& s : tb.sentences) {
      for (const Word& w : s.words) {
        const std::u32string form = utf8_decode(w.form);
        if (form.size() != w.span->length()) throw DataError("span length of '" + w.form + "' disagrees with form");
        std::copy(form.begin(), form.end(), text.begin() + static_cast<long>(w.span->start));
      }
    }
    tb.raw_text = utf8_encode(text);
    return;
  }
  std::u32string text;
  for (std::size_t si = 0; si < tb.sentences.size(); ++si) {
    if (si) text += U'\n';
    Sentence& s = tb.sentences[si];
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      if (i && !space_after_no(s.words[i - 1])) text += U' ';
      const std::u32string form = utf8_decode(s.words[i].form);
      s.words[i].span = Span{text.size(), text.size() + form.size()};
      text += form;
    }
  }
  tb.raw_text = utf8_encode(text);
}

std::string tree_error(const Sentence& sentence) {
  const std::size_t n = sentence.words.size();
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Word& w = sentence.words[i];
    if (w.id != static_cast<int>(i) + 1) return "word ids are not 1..n";
    if (w.head < 0) return "word " + std::to_string(w.id) + " has no head";
    if (w.head > static_cast<int>(n)) return "head of word " + std::to_string(w.id) + " out of range";
    if (w.head == w.id) return "word " + std::to_string(w.id) + " heads itself";
    if (w.head == 0) ++roots;
  }
  if (roots != 1) return std::to_string(roots) + " words attach to the root";
  for (std::size_t i = 0; i < n; ++i) {
    int cur = static_cast<int>(i) + 1;
    for (std::size_t steps = 0; cur != 0; ++steps) {
      if (steps > n) return "cycle through word " + std::to_string(i + 1);
      cur = sentence.words[cur - 1].head;
    }
  }
  return {};
}

Treebank combine_treebanks(const Treebank& a, const Treebank& b) {
  if (a.role != b.role) {
    throw DataError(std::string("cannot combine a ") + role_name(a.role) + " treebank with a " + role_name(b.role) +
                    " treebank");
  }
  if (b.sentences.empty()) return a;
  if (a.sentences.empty()) return b;
  Treebank out = a;
  const std::size_t offset = (a.raw_text ? utf8_length(*a.raw_text) : max_span_end(a)) + 2;
  for (Sentence s : b.sentences) {
    for (Word& w : s.words) {
      if (w.span) w.span = Span{w.span->start + offset, w.span->end + offset};
    }
    out.sentences.push_back(std::move(s));
  }
  if (a.raw_text && b.raw_text) {
    out.raw_text = *a.raw_text + "\n\n" + *b.raw_text;
  } else {
    out.raw_text.reset();
  }
  return out;
}

NoteCollection read_notes(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  NoteCollection out;
  std::map<std::string, std::string> seen;
  for (const auto& f : files) {
    const std::string id = f.stem().string();
    if (seen.count(id)) throw DataError("duplicate note identifier '" + id + "'");
    seen[id] = f.string();
    std::string text = read_file(f);
    if (!utf8_valid(text)) throw DataError(f.string() + ": invalid UTF-8");
    out.notes.push_back(Note{id, std::move(text)});
  }
  return out;
}

std::array<std::size_t, 3> largest_remainder(std::size_t total, const std::array<std::size_t, 3>& ratios) {
  std::size_t sum = 0;
  for (const std::size_t r : ratios) {
    if (r == 0) throw DataError("split ratios must be positive");
    sum += r;
  }
  std::array<std::size_t, 3> sizes{}, rem{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sizes[i] = total * ratios[i] / sum;
    rem[i] = total * ratios[i] % sum;
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rem[x] > rem[y]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

NoteSplit stratified_split(const NoteCollection& notes, const std::array<std::size_t, 3>& ratios,
                           std::uint64_t seed) {
  if (notes.notes.size() < 3) throw DataError("need at least 3 notes to split, got " + std::to_string(notes.notes.size()));
  std::map<std::string, int> ids;
  for (const Note& n : notes.notes) {
    if (ids[n.id]++) throw DataError("duplicate note identifier '" + n.id + "'");
  }
  const auto sizes = largest_remainder(notes.notes.size(), ratios);
  std::vector<std::size_t> order(notes.notes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  NoteSplit out;
  NoteCollection* parts[3] = {&out.train, &out.dev, &out.test};
  std::size_t k = 0;
  for (std::size_t part = 0; part < 3; ++part) {
    std::vector<std::size_t> chosen(order.begin() + static_cast<long>(k),
                                    order.begin() + static_cast<long>(k + sizes[part]));
    std::sort(chosen.begin(), chosen.end());
    for (const std::size_t i : chosen) parts[part]->notes.push_back(notes.notes[i]);
    k += sizes[part];
  }
  return out;
}

Segmentation regex_tokenize(const std::string& text) {
  static const std::regex token_re(
      R"((?:Dr|Mr|Mrs|Ms|Fig|Figs|No|vs|approx|e\.g|i\.e|etc)\.)"
      R"(|\d+(?:[.,]\d+)+)"
      R"(|n't|'s(?![A-Za-z]))"
      R"(|[^\s!-/:-@\[-`{-~]+?(?=n't))"
      R"(|[^\s!-/:-@\[-`{-~]+)"
      R"(|\S)");
  if (!utf8_valid(text)) throw InputError("regex_tokenize: invalid UTF-8");
  // Scalar offset of each byte that starts a character; matches start and end
  // on character starts only.
  std::vector<std::size_t> scalar_at(text.size() + 1, 0);
  std::size_t idx = 0;
  for (std::size_t b = 0; b < text.size(); ++b) {
    scalar_at[b] = idx;
    if ((static_cast<unsigned char>(text[b]) & 0xC0) != 0x80) ++idx;
  }
  scalar_at[text.size()] = idx;

  Segmentation seg;
  std::vector<Span> sentence;
  std::size_t prev_end_byte = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), token_re); it != std::sregex_iterator(); ++it) {
    const std::size_t b = static_cast<std::size_t>(it->position());
    const std::size_t e = b + static_cast<std::size_t>(it->length());
    const std::string_view gap(text.data() + prev_end_byte, b - prev_end_byte);
    const std::size_t first_nl = gap.find('\n');
    if (first_nl != std::string_view::npos && gap.find('\n', first_nl + 1) != std::string_view::npos &&
        !sentence.empty()) {
      seg.push_back(std::move(sentence));
      sentence.clear();
    }
    sentence.push_back(Span{scalar_at[b], scalar_at[e]});
    const std::string tok = it->str();
    if (tok == "." || tok == "!" || tok == "?") {
      seg.push_back(std::move(sentence));
      sentence.clear();
    }
    prev_end_byte = e;
  }
  if (!sentence.empty()) seg.push_back(std::move(sentence));
  return seg;
}

Segmentation whitespace_tokenize(const std::string& text) {
  const std::u32string t = utf8_decode(text);
  Segmentation seg;
  std::vector<Span> sentence;
  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] == U'\n') {
      if (!sentence.empty()) seg.push_back(std::move(sentence));
      sentence.clear();
      ++i;
      continue;
    }
    if (is_space(t[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < t.size() && !is_space(t[i])) ++i;
    sentence.push_back(Span{start, i});
  }
  if (!sentence.empty()) seg.push_back(std::move(sentence));
  return seg;
}

void validate_segmentation(const Segmentation& seg, const std::u32string& text) {
  std::size_t last = 0;
  for (const auto& sentence : seg) {
    if (sentence.empty()) throw DataError("segmentation contains an empty sentence");
    for (const Span& s : sentence) {
      if (s.start >= s.end) throw DataError("segmentation contains an empty token");
      if (s.start < last) throw DataError("segmentation tokens overlap or are out of order");
      if (s.end > text.size()) throw DataError("segmentation token exceeds the text");
      if (has_space(std::u32string_view(text).substr(s.start, s.length()))) {
        throw DataError("segmentation token contains whitespace");
      }
      last = s.end;
    }
  }
}

Treebank build_silver_treebank(const NoteCollection& notes, const TokenizationHook& hook,
                               const SegmentedAnnotator& annotate, Role role) {
  Treebank tb;
  tb.role = role;
  std::string raw;
  std::size_t offset = 0;
  for (std::size_t ni = 0; ni < notes.notes.size(); ++ni) {
    const Note& note = notes.notes[ni];
    if (ni) {
      raw += "\n\n";
      offset += 2;
    }
    const std::u32string text = utf8_decode(note.text);
    const Segmentation seg = hook(note.text);
    validate_segmentation(seg, text);
    Document doc = annotate(note.text, seg);
    if (doc.sentences.size() != seg.size()) throw DataError("annotator changed the sentence count of note " + note.id);
    for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
      Sentence s = std::move(doc.sentences[si]);
      if (s.words.size() != seg[si].size()) throw DataError("annotator changed the token count of note " + note.id);
      const std::string err = tree_error(s);
      if (!err.empty()) throw DataError("silver tree in note " + note.id + ": " + err);
      for (std::size_t wi = 0; wi < s.words.size(); ++wi) {
        const Span sp = seg[si][wi];
        s.words[wi].span = Span{sp.start + offset, sp.end + offset};
      }
      const Span sent{seg[si].front().start, seg[si].back().end};
      s.comments = {"# note_id = " + note.id, "# sent_id = " + note.id + "-" + std::to_string(si + 1),
                    "# text = " + utf8_encode(std::u32string_view(text).substr(sent.start, sent.length()))};
      for (char& c : s.comments.back()) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
      }
      tb.sentences.push_back(std::move(s));
    }
    raw += note.text;
    offset += text.size();
  }
  tb.raw_text = std::move(raw);
  return tb;
}

std::vector<TaggedSentence> read_ner_corpus(std::string_view bytes) {
  static const std::regex tag_re(R"(O|[BIES]-\S+)");
  std::vector<TaggedSentence> out;
  TaggedSentence cur;
  auto finish = [&] {
    if (cur.tokens.empty()) return;
    if (!(cur.tokens.size() == 1 && cur.tokens[0] == "-DOCSTART-")) {
      cur.tags = bio_to_bioes(cur.tags);
      out.push_back(std::move(cur));
    }
    cur = TaggedSentence{};
  };
  std::size_t line_no = 0, pos = 0;
  while (pos < bytes.size()) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) end = bytes.size();
    std::string_view line = bytes.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      finish();
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 2 || cols[0].empty()) fail(line_no, "expected token<TAB>tag");
    if (!utf8_valid(cols[0])) fail(line_no, "invalid UTF-8");
    const std::string tag(cols[1]);
    if (!std::regex_match(tag, tag_re)) fail(line_no, "unknown tag '" + tag + "'");
    cur.tokens.emplace_back(cols[0]);
    cur.tags.push_back(tag);
  }
  finish();
  return out;
}

std::string write_ner_corpus(const std::vector<TaggedSentence>& sentences) {
  std::string out;
  for (const TaggedSentence& s : sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) out += s.tokens[i] + "\t" + s.tags[i] + "\n";
    out += "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace biopipe
