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

#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "biopipe/ablation.hpp"
#include "biopipe/error.hpp"
#include "biopipe/pipeline.hpp"

namespace biopipe {

namespace fs = std::filesystem;

namespace {

struct Options {
  // train
  std::string processor;
  std::vector<std::string> treebanks, texts;
  std::string text, corpus, vectors, charlm, out, name;
  bool baseline = false;
  std::size_t epochs = 0;
  std::uint64_t seed = 1;
  // annotate and friends
  std::string package, registry, processors, input = "-", output = "-", format = "conllu";
  bool pretokenized = false;
  // evaluate
  std::string system, gold, gold_text, system_text, mode = "end2end";
  // benchmark
  int reps = 3;
  // build-silver
  std::string notes, split = "6:1:1";
  // ablate
  std::string train_file, dev_file;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (path != "-") return read_file(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path == "-") {
    out << bytes;
  } else {
    write_file(path, bytes);
  }
}

std::optional<std::string> opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

ModelPackage open_or_new(const fs::path& dir, const std::string& name) {
  ModelPackage pkg;
  if (fs::exists(dir / "manifest.json")) pkg = load_package(dir);
  if (!name.empty()) pkg.name = name;
  if (pkg.name.empty()) pkg.name = dir.filename().string();
  return pkg;
}

// Repeated --treebank files are combined; --text entries pair up by position.
Treebank treebank_arg(const Options& o) {
  if (o.treebanks.empty()) throw ConfigError("--treebank is required");
  if (!o.texts.empty() && o.texts.size() != o.treebanks.size()) {
    throw ConfigError("give one --text per --treebank or none");
  }
  Treebank out;
  for (std::size_t i = 0; i < o.treebanks.size(); ++i) {
    const auto raw = o.texts.empty() ? std::nullopt : std::optional<fs::path>(o.texts[i]);
    Treebank tb = load_treebank(o.treebanks[i], raw);
    out = i == 0 ? std::move(tb) : combine_treebanks(out, tb);
  }
  return out;
}

std::string charlm_text(const std::string& path) {
  std::vector<std::string> lines;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::string joined;
  for (const std::string& l : filter_corpus(lines)) joined += l + "\n";
  return joined;
}

std::pair<CharLm, CharLm> train_charlm_pair(const std::string& text, const Options& o) {
  CharLmConfig cfg;
  if (o.epochs) cfg.epochs = o.epochs;
  return {train_charlm(text, Direction::kForward, cfg, o.seed, nullptr),
          train_charlm(text, Direction::kBackward, cfg, o.seed + 1, nullptr)};
}

void cmd_train(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ConfigError("--out is required");
  ModelPackage pkg = open_or_new(o.out, o.name);
  const std::size_t e = o.epochs;
  if (o.processor == "tokenize") {
    SegmenterConfig c;
    if (e) c.epochs = e;
    pkg.tokenize = train_segmenter(treebank_arg(o), c, o.seed);
  } else if (o.processor == "pos") {
    TaggerConfig c;
    if (e) c.epochs = e;
    std::optional<WordVectors> vectors;
    if (!o.vectors.empty()) vectors = read_word_vectors(read_file(o.vectors));
    pkg.pos = train_tagger(treebank_arg(o), c, o.seed, std::move(vectors));
  } else if (o.processor == "lemma") {
    LemmatizerConfig c;
    if (e) c.epochs = e;
    pkg.lemma = train_lemmatizer(treebank_arg(o), c, o.seed);
  } else if (o.processor == "depparse") {
    ParserConfig c;
    if (e) c.epochs = e;
    pkg.depparse = train_parser(treebank_arg(o), c, o.seed);
  } else if (o.processor == "charlm") {
    if (o.texts.size() != 1) throw ConfigError("charlm needs exactly one --text");
    auto [f, b] = train_charlm_pair(charlm_text(o.texts[0]), o);
    pkg.charlm = CharLmPair{std::move(f), std::move(b)};
  } else if (o.processor == "ner") {
    if (o.corpus.empty()) throw ConfigError("--corpus is required for ner");
    const auto corpus = read_ner_corpus(read_file(o.corpus));
    NerConfig c;
    if (e) c.epochs = e;
    if (o.baseline) {
      pkg.ner = train_ner(corpus, CharLm{}, CharLm{}, c, o.seed, NerMode::kBaseline);
    } else {
      std::optional<ModelPackage> lm_pkg;
      const CharLmPair* lms = pkg.charlm ? &*pkg.charlm : nullptr;
      if (!o.charlm.empty()) {
        lm_pkg = load_package(o.charlm);
        lms = lm_pkg->charlm ? &*lm_pkg->charlm : nullptr;
      }
      if (!lms) throw ConfigError("ner needs a charlm processor in the package or --charlm (or use --baseline)");
      pkg.ner = train_ner(corpus, lms->forward, lms->backward, c, o.seed, NerMode::kCharLm);
    }
  } else {
    throw ConfigError("unknown processor '" + o.processor + "'");
  }
  save_package(pkg, o.out);
  out << "saved " << o.processor << " to " << o.out << "\n";
}

Pipeline pipeline_arg(const Options& o) {
  if (o.package.empty()) throw ConfigError("--package is required");
  PipelineConfig config;
  config.package = o.package;
  config.pretokenized = o.pretokenized;
  if (!o.processors.empty()) parse_processor_spec(o.processors, config);
  return build_pipeline(config, resolve_registry(opt(o.registry)));
}

void cmd_annotate(const Options& o, std::istream& in, std::ostream& out) {
  if (o.format != "conllu" && o.format != "entities") throw ConfigError("--format must be conllu or entities");
  const Pipeline pipeline = pipeline_arg(o);
  const Document doc = annotate(pipeline, read_input(o.input, in));
  emit(o.output, o.format == "conllu" ? write_conllu(doc) : format_entity_table(doc), out);
}

Document load_document(const std::string& conllu, const std::string& raw) {
  return document_from_treebank(load_treebank(conllu, raw.empty() ? std::nullopt : std::optional<fs::path>(raw)));
}

void cmd_evaluate(const Options& o, std::ostream& out) {
  if (o.gold.empty()) throw ConfigError("--gold is required");
  const EvalMode mode = parse_eval_mode(o.mode);
  if (o.system.empty() == o.package.empty()) throw ConfigError("give exactly one of --system and --package");
  if (!o.system.empty() && mode != EvalMode::kEnd2End) {
    throw ConfigError("--mode " + o.mode + " annotates the gold input and needs --package");
  }
  const Document gold = load_document(o.gold, o.gold_text);
  Document system;
  if (!o.system.empty()) {
    system = load_document(o.system, o.system_text);
  } else {
    system = annotate_gold_input(pipeline_arg(o), gold, mode);
  }
  MetricReport report = evaluate_documents(system, gold);
  report.notes.push_back("mode=" + o.mode);
  out << report.format();
}

void cmd_benchmark(const Options& o, std::ostream& out) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  const Pipeline pipeline = pipeline_arg(o);
  const auto runs = benchmark_pipeline(pipeline, read_file(o.corpus), o.reps);
  out << benchmark_report(runs, "pipeline");
}

void cmd_build_silver(const Options& o, std::ostream& out) {
  if (o.notes.empty() || o.out.empty()) throw ConfigError("--notes and --out are required");
  const auto ratios = parse_split(o.split);
  const Pipeline pipeline = pipeline_arg(o);
  const auto splits = build_silver_splits(pipeline, read_notes(o.notes), ratios, o.seed);
  fs::create_directories(o.out);
  for (const Treebank& tb : splits) {
    const std::string stem = role_name(tb.role);
    write_file(fs::path(o.out) / (stem + ".conllu"), write_conllu(tb));
    write_file(fs::path(o.out) / (stem + ".txt"), tb.raw_text.value_or(""));
    out << stem << "\t" << tb.sentences.size() << " sentences\t" << tb.num_words() << " words\n";
  }
}

void cmd_ablate(const Options& o, std::ostream& out) {
  if (o.train_file.empty() || o.dev_file.empty() || o.text.empty()) {
    throw ConfigError("--train, --dev and --text are required");
  }
  const auto train = read_ner_corpus(read_file(o.train_file));
  const auto dev = read_ner_corpus(read_file(o.dev_file));
  auto [f, b] = train_charlm_pair(charlm_text(o.text), o);
  out << charlm_ablation(train, dev, f, b, NerConfig{}, o.seed).table;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"biopipe: biomedical and clinical text annotation"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* train = app.add_subcommand("train", "Train one processor into a package directory");
  train->add_option("processor", o.processor, "tokenize, pos, lemma, depparse, charlm or ner")
      ->required()
      ->check(CLI::IsMember({"tokenize", "pos", "lemma", "depparse", "charlm", "ner"}));
  train->add_option("--treebank", o.treebanks, "CoNLL-U training file; repeat to combine treebanks");
  train->add_option("--text", o.texts, "Raw text per treebank, or the CharLM corpus");
  train->add_option("--corpus", o.corpus, "NER training file");
  train->add_option("--vectors", o.vectors, "Word vectors for the tagger");
  train->add_option("--charlm", o.charlm, "Package directory holding a charlm processor");
  train->add_flag("--baseline", o.baseline, "NER with a character BiLSTM instead of a CharLM");
  train->add_option("--epochs", o.epochs, "Override the epoch count");
  train->add_option("--seed", o.seed, "Random seed");
  train->add_option("--out", o.out, "Package directory")->required();
  train->add_option("--name", o.name, "Package name");

  const auto add_pipeline = [&](CLI::App* sub, bool required) {
    auto* p = sub->add_option("--package", o.package, "Package name or directory");
    if (required) p->required();
    sub->add_option("--registry", o.registry, "Registry directory (default $BIOPIPE_REGISTRY)");
    sub->add_option("--processors", o.processors, "e.g. tokenize,pos or ner=toy-i2b2");
  };

  auto* annotate_cmd = app.add_subcommand("annotate", "Annotate text");
  add_pipeline(annotate_cmd, true);
  annotate_cmd->add_flag("--pretokenized", o.pretokenized, "One sentence per line, tokens split by whitespace");
  annotate_cmd->add_option("--input", o.input, "Input file, - for stdin");
  annotate_cmd->add_option("--output", o.output, "Output file, - for stdout");
  annotate_cmd->add_option("--format", o.format, "conllu or entities")
      ->check(CLI::IsMember({"conllu", "entities"}));

  auto* evaluate = app.add_subcommand("evaluate", "Score system output against gold CoNLL-U");
  evaluate->add_option("--gold", o.gold, "Gold CoNLL-U")->required();
  evaluate->add_option("--gold-text", o.gold_text, "Raw text for the gold offsets");
  evaluate->add_option("--system", o.system, "System CoNLL-U");
  evaluate->add_option("--system-text", o.system_text, "Raw text for the system offsets");
  evaluate->add_option("--mode", o.mode, "end2end, goldtok or goldtag")
      ->check(CLI::IsMember({"end2end", "goldtok", "goldtag"}));
  add_pipeline(evaluate, false);

  auto* bench = app.add_subcommand("benchmark", "Relative runtime of pipeline stages");
  add_pipeline(bench, true);
  bench->add_option("--corpus", o.corpus, "Raw text to annotate")->required();
  bench->add_option("--reps", o.reps, "Repetitions")->check(CLI::PositiveNumber);

  auto* silver = app.add_subcommand("build-silver", "Silver treebank from clinical notes");
  add_pipeline(silver, true);
  silver->add_option("--notes", o.notes, "Directory of notes")->required();
  silver->add_option("--split", o.split, "train:dev:test ratio");
  silver->add_option("--seed", o.seed, "Split seed");
  silver->add_option("--out", o.out, "Output directory")->required();

  auto* ablate = app.add_subcommand("ablate", "CharLM against character BiLSTM NER");
  ablate->add_option("--train", o.train_file, "NER training file")->required();
  ablate->add_option("--dev", o.dev_file, "NER dev file")->required();
  ablate->add_option("--text", o.text, "CharLM corpus")->required();
  ablate->add_option("--epochs", o.epochs, "CharLM epochs");
  ablate->add_option("--seed", o.seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) cmd_train(o, out);
    if (*annotate_cmd) cmd_annotate(o, in, out);
    if (*evaluate) cmd_evaluate(o, out);
    if (*bench) cmd_benchmark(o, out);
    if (*silver) cmd_build_silver(o, out);
    if (*ablate) cmd_ablate(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace biopipe
