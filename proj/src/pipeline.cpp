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

#include "biopipe/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "biopipe/error.hpp"
#include "biopipe/unicode.hpp"

namespace biopipe {

namespace {

const std::vector<std::string> kStages = {"tokenize", "pos", "lemma", "depparse", "ner"};

bool known_stage(const std::string& s) { return std::find(kStages.begin(), kStages.end(), s) != kStages.end(); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

bool provides(const ModelPackage& p, const std::string& stage) {
  const auto have = p.processors();
  return std::find(have.begin(), have.end(), stage) != have.end();
}

}  // namespace

void parse_processor_spec(const std::string& spec, PipelineConfig& config) {
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in processor list '" + spec + "'");
    if (const auto eq = item.find('='); eq != std::string::npos) {
      const std::string stage = trim(item.substr(0, eq));
      const std::string pkg = trim(item.substr(eq + 1));
      if (!known_stage(stage)) throw ConfigError("unknown processor '" + stage + "'");
      if (pkg.empty()) throw ConfigError("processor '" + stage + "' has an empty package override");
      config.overrides[stage] = pkg;
      continue;
    }
    if (!known_stage(item)) throw ConfigError("unknown processor '" + item + "'");
    if (std::find(config.processors.begin(), config.processors.end(), item) == config.processors.end()) {
      config.processors.push_back(item);
    }
  }
}

bool Pipeline::has(const std::string& stage) const {
  return std::find(stages_.begin(), stages_.end(), stage) != stages_.end();
}

namespace {

void check_stages(const PipelineConfig& config, const std::vector<std::string>& stages,
              const std::map<std::string, const ModelPackage*>& source) {
  for (const auto& [stage, pkg] : source) {
    if (!provides(*pkg, stage)) {
      throw ConfigError("package '" + pkg->name + "' has no '" + stage + "' processor");
    }
  }
  const auto want = [&](const std::string& s) { return std::find(stages.begin(), stages.end(), s) != stages.end(); };
  const auto require = [&](const std::string& stage, const std::string& dep) {
    if (want(stage) && !want(dep)) {
      throw ConfigError("processor '" + stage + "' requires '" + dep + "'");
    }
  };
  if (!config.pretokenized) {
    for (const std::string s : {"pos", "ner"}) require(s, "tokenize");
  }
  require("lemma", "pos");
  require("depparse", "pos");
  require("depparse", "lemma");
}

}  // namespace

Pipeline pipeline_from_package(std::shared_ptr<const ModelPackage> package, const PipelineConfig& config) {
  if (!config.overrides.empty()) throw ConfigError("overrides need a registry");
  Pipeline pipe;
  pipe.config_ = config;
  std::vector<std::string> requested = config.processors;
  if (requested.empty()) {
    for (const std::string& s : kStages) {
      if (provides(*package, s) && !(config.pretokenized && s == "tokenize")) requested.push_back(s);
    }
  }
  std::map<std::string, const ModelPackage*> source;
  for (const std::string& s : requested) {
    if (!known_stage(s)) throw ConfigError("unknown processor '" + s + "'");
    source[s] = package.get();
  }
  for (const std::string& s : kStages) {
    if (source.count(s)) pipe.stages_.push_back(s);
  }
  if (config.pretokenized) std::erase(pipe.stages_, "tokenize");
  check_stages(config, pipe.stages_, source);
  const ModelPackage& p = *package;
  if (pipe.has("tokenize")) pipe.tokenize_ = &*p.tokenize;
  if (pipe.has("pos")) pipe.pos_ = &*p.pos;
  if (pipe.has("lemma")) pipe.lemma_ = &*p.lemma;
  if (pipe.has("depparse")) pipe.depparse_ = &*p.depparse;
  if (pipe.has("ner")) pipe.ner_ = &*p.ner;
  pipe.packages_.push_back(std::move(package));
  return pipe;
}

Pipeline build_pipeline(const PipelineConfig& config, const std::filesystem::path& registry) {
  std::map<std::string, std::shared_ptr<const ModelPackage>> loaded;
  const auto load = [&](const std::string& name) {
    auto& slot = loaded[name];
    if (!slot) slot = std::make_shared<const ModelPackage>(load_package(package_path(registry, name)));
    return slot;
  };
  const auto base = load(config.package);
  PipelineConfig plain = config;
  plain.overrides.clear();
  if (plain.processors.empty()) {
    for (const std::string& s : kStages) {
      if (provides(*base, s) && !(config.pretokenized && s == "tokenize")) plain.processors.push_back(s);
    }
  }
  for (const auto& [stage, name] : config.overrides) {
    if (std::find(plain.processors.begin(), plain.processors.end(), stage) == plain.processors.end()) {
      plain.processors.push_back(stage);
    }
  }
  Pipeline pipe;
  pipe.config_ = config;
  std::map<std::string, const ModelPackage*> source;
  for (const std::string& s : plain.processors) {
    if (!known_stage(s)) throw ConfigError("unknown processor '" + s + "'");
    const auto it = config.overrides.find(s);
    source[s] = it == config.overrides.end() ? base.get() : load(it->second).get();
  }
  for (const std::string& s : kStages) {
    if (source.count(s) && !(config.pretokenized && s == "tokenize")) pipe.stages_.push_back(s);
  }
  check_stages(config, pipe.stages_, source);
  if (pipe.has("tokenize")) pipe.tokenize_ = &*source["tokenize"]->tokenize;
  if (pipe.has("pos")) pipe.pos_ = &*source["pos"]->pos;
  if (pipe.has("lemma")) pipe.lemma_ = &*source["lemma"]->lemma;
  if (pipe.has("depparse")) pipe.depparse_ = &*source["depparse"]->depparse;
  if (pipe.has("ner")) pipe.ner_ = &*source["ner"]->ner;
  for (auto& [name, pkg] : loaded) pipe.packages_.push_back(pkg);
  return pipe;
}

void annotate_segmented(const Pipeline& pipeline, Document& doc) {
  if (pipeline.tagger()) tag_document(*pipeline.tagger(), doc);
  if (pipeline.lemmatizer()) lemmatize_document(*pipeline.lemmatizer(), doc);
  if (pipeline.parser()) parse_document(*pipeline.parser(), doc);
  if (pipeline.recognizer()) recognize_document(*pipeline.recognizer(), doc);
}

Document annotate(const Pipeline& pipeline, const std::string& text) {
  if (!utf8_valid(text)) throw InputError("input is not valid UTF-8");
  if (pipeline.config().pretokenized) {
    std::vector<std::vector<std::string>> sentences;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::vector<std::string> tokens;
      std::istringstream fields(line);
      std::string tok;
      while (fields >> tok) tokens.push_back(tok);
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
    return annotate_pretokenized(pipeline, sentences);
  }
  if (!pipeline.tokenizer()) throw ConfigError("pipeline has no tokenize processor");
  Document doc = segment(*pipeline.tokenizer(), text);
  annotate_segmented(pipeline, doc);
  return doc;
}

Document annotate_pretokenized(const Pipeline& pipeline, const std::vector<std::vector<std::string>>& sentences) {
  std::string text;
  Segmentation seg;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (sentences[s].empty()) throw InputError("sentence " + std::to_string(s + 1) + " has no tokens");
    if (s > 0) {
      text += '\n';
      ++offset;
    }
    std::vector<Span> spans;
    for (std::size_t t = 0; t < sentences[s].size(); ++t) {
      const std::string& tok = sentences[s][t];
      const std::string where = "sentence " + std::to_string(s + 1) + " token " + std::to_string(t + 1);
      if (tok.empty()) throw InputError(where + " is empty");
      if (!utf8_valid(tok)) throw InputError(where + " is not valid UTF-8");
      const std::u32string chars = utf8_decode(tok);
      if (std::any_of(chars.begin(), chars.end(), is_space)) throw InputError(where + " contains whitespace");
      if (t > 0) {
        text += ' ';
        ++offset;
      }
      text += tok;
      spans.push_back(Span{offset, offset + chars.size()});
      offset += chars.size();
    }
    seg.push_back(std::move(spans));
  }
  Document doc = document_from_segmentation(text, seg);
  annotate_segmented(pipeline, doc);
  return doc;
}

Document strip_annotations(const Document& doc) {
  Document out;
  out.text = doc.text;
  for (const Sentence& s : doc.sentences) {
    Sentence t;
    for (const Word& w : s.words) {
      Word v;
      v.id = w.id;
      v.form = w.form;
      v.span = w.span;
      t.words.push_back(std::move(v));
    }
    out.sentences.push_back(std::move(t));
  }
  return out;
}

EvalMode parse_eval_mode(const std::string& name) {
  if (name == "end2end") return EvalMode::kEnd2End;
  if (name == "goldtok") return EvalMode::kGoldTokens;
  if (name == "goldtag") return EvalMode::kGoldTags;
  throw ConfigError("unknown evaluation mode '" + name + "' (expected end2end, goldtok or goldtag)");
}

Document annotate_gold_input(const Pipeline& pipeline, const Document& gold, EvalMode mode) {
  if (mode == EvalMode::kEnd2End) return annotate(pipeline, gold.text);
  Document doc = strip_annotations(gold);
  if (mode == EvalMode::kGoldTokens) {
    annotate_segmented(pipeline, doc);
    return doc;
  }
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (std::size_t w = 0; w < doc.sentences[s].words.size(); ++w) {
      doc.sentences[s].words[w].upos = gold.sentences[s].words[w].upos;
      doc.sentences[s].words[w].xpos = gold.sentences[s].words[w].xpos;
    }
  }
  if (pipeline.lemmatizer()) lemmatize_document(*pipeline.lemmatizer(), doc);
  if (pipeline.parser()) parse_document(*pipeline.parser(), doc);
  if (pipeline.recognizer()) recognize_document(*pipeline.recognizer(), doc);
  return doc;
}

Segmentation segmentation_of(const Document& doc) {
  Segmentation seg;
  for (const Sentence& s : doc.sentences) {
    std::vector<Span> spans;
    for (const Word& w : s.words) {
      if (!w.span) throw DataError("word '" + w.form + "' has no span");
      spans.push_back(*w.span);
    }
    seg.push_back(std::move(spans));
  }
  return seg;
}

std::string format_entity_table(const Document& doc) {
  std::string out;
  for (const Entity& e : doc.entities) {
    out += e.text + "\t" + e.type + "\t" + std::to_string(e.span.start) + "\t" + std::to_string(e.span.end) + "\n";
  }
  return out;
}

std::array<Treebank, 3> build_silver_splits(const Pipeline& pipeline, const NoteCollection& notes,
                                            const std::array<std::size_t, 3>& ratios, std::uint64_t seed) {
  const NoteSplit split = stratified_split(notes, ratios, seed);
  TokenizationHook hook = regex_tokenize;
  if (pipeline.tokenizer()) {
    hook = [&pipeline](const std::string& text) { return segmentation_of(segment(*pipeline.tokenizer(), text)); };
  }
  const SegmentedAnnotator annotator = [&pipeline](const std::string& text, const Segmentation& seg) {
    Document doc = document_from_segmentation(text, seg);
    annotate_segmented(pipeline, doc);
    return doc;
  };
  return {build_silver_treebank(split.train, hook, annotator, Role::kTrain),
          build_silver_treebank(split.dev, hook, annotator, Role::kDev),
          build_silver_treebank(split.test, hook, annotator, Role::kTest)};
}

std::array<std::size_t, 3> parse_split(const std::string& spec) {
  std::array<std::size_t, 3> out{};
  std::istringstream in(spec);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ':')) {
    if (i == 3 || part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("split must look like 6:1:1, got '" + spec + "'");
    }
    out[i++] = std::stoul(part);
  }
  if (i != 3 || out[0] + out[1] + out[2] == 0) throw ConfigError("split must look like 6:1:1, got '" + spec + "'");
  return out;
}

std::vector<BenchmarkRun> benchmark_pipeline(const Pipeline& pipeline, const std::string& corpus, int reps) {
  if (reps < 1) throw ConfigError("benchmark needs at least one repetition");
  if (!pipeline.tokenizer()) throw ConfigError("benchmark needs a tokenize processor");
  if (!utf8_valid(corpus)) throw InputError("corpus is not valid UTF-8");
  std::vector<BenchmarkRun> runs;
  const std::vector<std::string>& stages = pipeline.stages();
  for (std::size_t k = 1; k <= stages.size(); ++k) {
    const std::vector<std::string> prefix(stages.begin(), stages.begin() + k);
    const auto work = [&]() {
      Document doc = segment(*pipeline.tokenizer(), corpus);
      const auto on = [&](const char* s) { return std::find(prefix.begin(), prefix.end(), s) != prefix.end(); };
      if (on("pos")) tag_document(*pipeline.tagger(), doc);
      if (on("lemma")) lemmatize_document(*pipeline.lemmatizer(), doc);
      if (on("depparse")) parse_document(*pipeline.parser(), doc);
      if (on("ner")) recognize_document(*pipeline.recognizer(), doc);
      return doc.num_words();
    };
    std::string name = k == stages.size() ? "pipeline" : "";
    if (name.empty()) {
      for (const std::string& s : prefix) name += (name.empty() ? "" : "+") + s;
    }
    runs.push_back(run_benchmark(name, work, static_cast<std::size_t>(reps)));
  }
  return runs;
}

}  // namespace biopipe
