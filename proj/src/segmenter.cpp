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

#include "biopipe/segmenter.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "biopipe/core/layers.hpp"
#include "biopipe/error.hpp"
#include "biopipe/unicode.hpp"

namespace biopipe {

namespace {

bool is_ascii_punct(char32_t c) {
  return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') || (c >= U'[' && c <= U'`') ||
         (c >= U'{' && c <= U'~');
}

Tensor char_features(char32_t c) {
  Tensor f(Shape{kCharFeatures});
  f[0] = is_space(c) ? 1.0 : 0.0;
  f[1] = to_lower(c) != c ? 1.0 : 0.0;
  f[2] = (c >= U'0' && c <= U'9') ? 1.0 : 0.0;
  f[3] = is_ascii_punct(c) ? 1.0 : 0.0;
  f[4] = c == U'\n' ? 1.0 : 0.0;
  return f;
}

}  // namespace

std::vector<CharLabel> make_char_labels(const std::u32string& text, const Segmentation& gold) {
  std::vector<CharLabel> labels(text.size(), CharLabel::kInside);
  std::size_t last = 0;
  for (const auto& sentence : gold) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const Span s = sentence[i];
      if (s.start >= s.end || s.end > text.size()) throw DataError("token span out of range");
      if (s.start < last) throw DataError("token spans overlap or are out of order");
      last = s.end;
      labels[s.end - 1] = (i + 1 == sentence.size()) ? CharLabel::kSentenceEnd : CharLabel::kTokenEnd;
    }
  }
  return labels;
}

Segmentation decode_boundaries(const std::u32string& text, const std::vector<CharLabel>& labels) {
  if (labels.size() != text.size()) throw ShapeError("decode_boundaries: one label per character required");
  Segmentation seg;
  std::vector<Span> sentence;
  bool open = false;
  std::size_t start = 0;
  auto close_token = [&](std::size_t end) {
    if (!open) return;
    sentence.push_back(Span{start, end});
    open = false;
  };
  auto close_sentence = [&] {
    if (sentence.empty()) return;
    seg.push_back(std::move(sentence));
    sentence.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_space(text[i])) {
      close_token(i);
      continue;
    }
    if (!open) {
      open = true;
      start = i;
    }
    if (labels[i] != CharLabel::kInside) close_token(i + 1);
    if (labels[i] == CharLabel::kSentenceEnd) close_sentence();
  }
  close_token(text.size());
  close_sentence();
  return seg;
}

Document document_from_segmentation(const std::string& text, const Segmentation& seg) {
  const std::u32string chars = utf8_decode(text);
  Document doc;
  doc.text = text;
  for (const auto& spans : seg) {
    Sentence s;
    int id = 1;
    for (const Span sp : spans) {
      Word w;
      w.id = id++;
      w.form = utf8_encode(std::u32string_view(chars).substr(sp.start, sp.length()));
      w.span = sp;
      s.words.push_back(std::move(w));
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

SegmenterModel::SegmenterModel(SegmenterConfig cfg, CharVocab chars)
    : config(cfg),
      vocab(std::move(chars)),
      embedding(vocab.size(), cfg.embedding_dim),
      forward(cfg.embedding_dim + kCharFeatures, cfg.hidden_dim),
      backward(cfg.embedding_dim + kCharFeatures, cfg.hidden_dim),
      output(2 * cfg.hidden_dim, 3) {}

void SegmenterModel::init(Rng& rng) {
  embedding.init(rng);
  forward.init(rng);
  backward.init(rng);
  output.init(rng);
}

ParamList SegmenterModel::parameters() {
  ParamList out;
  embedding.collect("embedding", out);
  forward.collect("forward", out);
  backward.collect("backward", out);
  output.collect("output", out);
  return out;
}

std::vector<Var> segmenter_logits(Graph& g, SegmenterModel& model, std::u32string_view chunk) {
  std::vector<Var> xs;
  xs.reserve(chunk.size());
  for (const char32_t c : chunk) {
    xs.push_back(g.concat({g.lookup(model.embedding.table, model.vocab.index(c)), g.constant(char_features(c))}));
  }
  const std::vector<Var> hs = run_bilstm(g, xs, model.forward, model.backward);
  std::vector<Var> logits;
  logits.reserve(hs.size());
  for (const Var h : hs) logits.push_back(g.affine(h, model.output));
  return logits;
}

Var segmenter_loss(Graph& g, SegmenterModel& model, std::u32string_view chunk, const std::vector<CharLabel>& labels) {
  if (labels.size() != chunk.size()) throw ShapeError("segmenter_loss: one label per character required");
  if (chunk.empty()) throw DomainError("segmenter_loss: empty chunk");
  const std::vector<Var> logits = segmenter_logits(g, model, chunk);
  Var total = g.cross_entropy(logits[0], static_cast<std::size_t>(labels[0]));
  for (std::size_t i = 1; i < logits.size(); ++i) {
    total = g.add(total, g.cross_entropy(logits[i], static_cast<std::size_t>(labels[i])));
  }
  Tensor scale = Tensor::scalar(1.0 / static_cast<double>(chunk.size()));
  return g.mul(total, g.constant(std::move(scale)));
}

std::vector<CharLabel> predict_char_labels(const SegmenterModel& model, const std::u32string& text) {
  const std::size_t n = text.size();
  std::vector<CharLabel> labels(n, CharLabel::kInside);
  if (n == 0) return labels;
  const std::size_t window = std::max<std::size_t>(model.config.window, 2);
  std::vector<std::size_t> starts;
  if (n <= window) {
    starts.push_back(0);
  } else {
    const std::size_t stride = window / 2;
    for (std::size_t s = 0; s + window < n; s += stride) starts.push_back(s);
    starts.push_back(n - window);
  }
  std::vector<std::array<int, 3>> votes(n, {0, 0, 0});
  std::vector<std::array<double, 3>> mass(n, {0.0, 0.0, 0.0});
  SegmenterModel& m = unfrozen(model);
  for (const std::size_t s : starts) {
    const std::size_t len = std::min(window, n - s);
    Graph g;
    const std::vector<Var> logits = segmenter_logits(g, m, std::u32string_view(text).substr(s, len));
    for (std::size_t i = 0; i < len; ++i) {
      const Tensor& l = g.value(logits[i]);
      const double mx = std::max({l[0], l[1], l[2]});
      double z = 0;
      std::array<double, 3> p{};
      for (std::size_t k = 0; k < 3; ++k) z += (p[k] = std::exp(l[k] - mx));
      for (std::size_t k = 0; k < 3; ++k) mass[s + i][k] += p[k] / z;
      ++votes[s + i][argmax(l.data())];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (is_space(text[i])) continue;
    std::size_t best = 0;
    for (std::size_t k = 1; k < 3; ++k) {
      if (votes[i][k] > votes[i][best] || (votes[i][k] == votes[i][best] && mass[i][k] > mass[i][best])) best = k;
    }
    labels[i] = static_cast<CharLabel>(best);
  }
  return labels;
}

Document segment(const SegmenterModel& model, const std::string& text) {
  const std::u32string chars = utf8_decode(text);
  if (chars.empty()) {
    Document doc;
    doc.text = text;
    return doc;
  }
  return document_from_segmentation(text, decode_boundaries(chars, predict_char_labels(model, chars)));
}

Segmentation treebank_segmentation(const Treebank& treebank) {
  Segmentation seg;
  for (const Sentence& s : treebank.sentences) {
    std::vector<Span> spans;
    for (const Word& w : s.words) {
      if (!w.span) throw DataError("treebank lacks character spans (word '" + w.form + "')");
      spans.push_back(*w.span);
    }
    if (!spans.empty()) seg.push_back(std::move(spans));
  }
  return seg;
}

SegmenterModel train_segmenter(const Treebank& treebank, const SegmenterConfig& config, std::uint64_t seed) {
  if (treebank.sentences.empty()) throw DataError("train_segmenter: empty treebank");
  if (!has_spans(treebank)) throw DataError("train_segmenter: treebank lacks character spans");
  Treebank tb = treebank;
  attach_spans(tb);
  const std::u32string text = utf8_decode(*tb.raw_text);
  const std::vector<CharLabel> labels = make_char_labels(text, treebank_segmentation(tb));

  CharVocab vocab;
  for (const char32_t c : text) vocab.add(c);
  Rng rng(seed);
  SegmenterModel model(config, std::move(vocab));
  model.init(rng);
  ParamList params = model.parameters();
  OptimizerState opt(config.adam);

  const std::size_t chunk = std::max<std::size_t>(config.train_window, 8);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::pair<std::size_t, std::size_t>> chunks;
    const std::size_t offset = rng.below(chunk);
    if (offset > 0) chunks.emplace_back(0, std::min(offset, text.size()));
    for (std::size_t s = offset; s < text.size(); s += chunk) chunks.emplace_back(s, std::min(chunk, text.size() - s));
    rng.shuffle(chunks);
    std::size_t in_batch = 0;
    zero_grads(params);
    for (const auto& [start, len] : chunks) {
      Graph g;
      const std::vector<CharLabel> part(labels.begin() + static_cast<long>(start),
                                        labels.begin() + static_cast<long>(start + len));
      g.backward(segmenter_loss(g, model, std::u32string_view(text).substr(start, len), part));
      if (++in_batch == config.batch_size) {
        adam_step(params, opt);
        zero_grads(params);
        in_batch = 0;
      }
    }
    if (in_batch > 0) adam_step(params, opt);
  }
  round_to_float(params);
  return model;
}

}  // namespace biopipe
