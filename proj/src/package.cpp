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

#include "biopipe/package.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <json.hpp>

#include "biopipe/error.hpp"

namespace biopipe {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<std::string> ModelPackage::processors() const {
  std::vector<std::string> out;
  if (tokenize) out.push_back("tokenize");
  if (pos) out.push_back("pos");
  if (lemma) out.push_back("lemma");
  if (depparse) out.push_back("depparse");
  if (charlm) out.push_back("charlm");
  if (ner) out.push_back("ner");
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw PackageError("sha256 failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t get_u32(std::string_view in, std::size_t& pos, const std::string& file) {
  if (pos + 4 > in.size()) throw PackageError(file + ": truncated weight file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += 4;
  return v;
}

}  // namespace

std::string encode_weights(const ParamList& params) {
  std::string out = "BPW1";
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& [name, p] : params) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    const Shape& s = p->value.shape();
    put_u32(out, static_cast<std::uint32_t>(s.rank()));
    for (std::size_t i = 0; i < s.rank(); ++i) put_u32(out, static_cast<std::uint32_t>(s[i]));
    for (const double v : p->value.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

void decode_weights(std::string_view bytes, const ParamList& params, const std::string& file) {
  if (bytes.substr(0, 4) != "BPW1") throw PackageError(file + ": not a weight file");
  std::size_t pos = 4;
  const std::uint32_t count = get_u32(bytes, pos, file);
  std::map<std::string, Parameter*> by_name;
  for (const auto& [name, p] : params) by_name.emplace(name, p);
  std::size_t filled = 0;
  for (std::uint32_t a = 0; a < count; ++a) {
    const std::uint32_t len = get_u32(bytes, pos, file);
    if (pos + len > bytes.size()) throw PackageError(file + ": truncated weight file");
    const std::string name(bytes.substr(pos, len));
    pos += len;
    const std::uint32_t rank = get_u32(bytes, pos, file);
    std::vector<std::size_t> dims;
    for (std::uint32_t i = 0; i < rank; ++i) dims.push_back(get_u32(bytes, pos, file));
    const auto it = by_name.find(name);
    if (it == by_name.end()) throw PackageError(file + ": unexpected array '" + name + "'");
    Tensor& t = it->second->value;
    bool same = t.shape().rank() == rank;
    for (std::uint32_t i = 0; same && i < rank; ++i) same = t.shape()[i] == dims[i];
    if (!same) throw PackageError(file + ": array '" + name + "' has shape skew against " + t.shape().str());
    for (double& v : t.data()) v = static_cast<double>(std::bit_cast<float>(get_u32(bytes, pos, file)));
    ++filled;
  }
  if (pos != bytes.size()) throw PackageError(file + ": trailing bytes in weight file");
  if (filled != params.size()) throw PackageError(file + ": weight file lacks some arrays");
}

namespace {

json adam_json(const AdamConfig& a) {
  return {{"learning_rate", a.learning_rate}, {"beta1", a.beta1}, {"beta2", a.beta2}, {"epsilon", a.epsilon}, {"clip_norm", a.clip_norm}};
}

AdamConfig adam_from(const json& j) {
  AdamConfig a;
  a.learning_rate = j.at("learning_rate");
  a.beta1 = j.at("beta1");
  a.beta2 = j.at("beta2");
  a.epsilon = j.at("epsilon");
  a.clip_norm = j.at("clip_norm");
  return a;
}

json vocab_json(const Vocab& v) { return {{"open", v.open()}, {"items", v.items()}}; }
Vocab vocab_from(const json& j) { return Vocab::from_items(j.at("items").get<std::vector<std::string>>(), j.at("open")); }

json chars_json(const CharVocab& v) {
  std::vector<std::uint32_t> items(v.items().begin(), v.items().end());
  return items;
}
CharVocab chars_from(const json& j) {
  const auto items = j.get<std::vector<std::uint32_t>>();
  return CharVocab::from_items(std::vector<char32_t>(items.begin(), items.end()));
}

// Hyperparameters, vocabularies and parameter list of one processor.
struct Serialized {
  json hyper;
  json vocab;
  ParamList params;
  std::unique_ptr<Parameter> extra;
};

json charlm_hyper(const CharLm& m) {
  return {{"direction", direction_name(m.direction)}, {"char_dim", m.config.char_dim},
          {"hidden_dim", m.config.hidden_dim},         {"chunk", m.config.chunk},
          {"epochs", m.config.epochs},                 {"adam", adam_json(m.config.adam)}};
}

CharLm charlm_from(const json& hyper, const json& vocab) {
  CharLmConfig c;
  c.char_dim = hyper.at("char_dim");
  c.hidden_dim = hyper.at("hidden_dim");
  c.chunk = hyper.at("chunk");
  c.epochs = hyper.at("epochs");
  c.adam = adam_from(hyper.at("adam"));
  const Direction d = hyper.at("direction") == "backward" ? Direction::kBackward : Direction::kForward;
  return CharLm(d, c, chars_from(vocab));
}

void prefixed(ParamList& out, const std::string& prefix, const ParamList& in) {
  for (const auto& [n, p] : in) out.emplace_back(prefix + n, p);
}

Serialized serialize(ModelPackage& pkg, const std::string& proc) {
  Serialized s;
  if (proc == "tokenize") {
    SegmenterModel& m = *pkg.tokenize;
    const auto& c = m.config;
    s.hyper = {{"embedding_dim", c.embedding_dim}, {"hidden_dim", c.hidden_dim}, {"window", c.window},
               {"train_window", c.train_window},   {"epochs", c.epochs},         {"batch_size", c.batch_size},
               {"adam", adam_json(c.adam)}};
    s.vocab = {{"chars", chars_json(m.vocab)}};
    s.params = m.parameters();
  } else if (proc == "pos") {
    TaggerModel& m = *pkg.pos;
    const auto& c = m.config;
    s.hyper = {{"word_dim", c.word_dim}, {"upos_dim", c.upos_dim},         {"hidden_dim", c.hidden_dim},
               {"epochs", c.epochs},     {"word_dropout", c.word_dropout}, {"adam", adam_json(c.adam)},
               {"vectors_dim", m.vectors ? m.vectors->dim() : 0}};
    s.vocab = {{"words", vocab_json(m.words)}, {"upos", vocab_json(m.upos)}, {"xpos", vocab_json(m.xpos)}};
    s.params = m.parameters();
    if (m.vectors) {
      s.vocab["vector_words"] = vocab_json(m.vectors->words);
      s.extra = std::make_unique<Parameter>();
      s.extra->value = m.vectors->table;
      s.params.emplace_back("external_vectors", s.extra.get());
    }
  } else if (proc == "lemma") {
    LemmaSeq2Seq& m = pkg.lemma->seq2seq;
    const auto& c = m.config;
    s.hyper = {{"char_dim", c.char_dim},         {"upos_dim", c.upos_dim},
               {"encoder_dim", c.encoder_dim},   {"decoder_dim", c.decoder_dim},
               {"attention_dim", c.attention_dim}, {"epochs", c.epochs},
               {"adam", adam_json(c.adam)}};
    json pairs = json::array(), forms = json::array();
    for (const auto& [k, v] : pkg.lemma->lexicon.by_form_upos) pairs.push_back({k.first, k.second, v});
    for (const auto& [k, v] : pkg.lemma->lexicon.by_form) forms.push_back({k, v});
    s.vocab = {{"chars", chars_json(m.chars)}, {"upos", vocab_json(m.upos)}, {"lexicon_form_upos", pairs},
               {"lexicon_form", forms}};
    s.params = m.parameters();
  } else if (proc == "depparse") {
    ParserModel& m = *pkg.depparse;
    const auto& c = m.config;
    s.hyper = {{"word_dim", c.word_dim}, {"tag_dim", c.tag_dim}, {"hidden_dim", c.hidden_dim},
               {"arc_dim", c.arc_dim},   {"rel_dim", c.rel_dim}, {"epochs", c.epochs},
               {"word_dropout", c.word_dropout}, {"adam", adam_json(c.adam)}};
    s.vocab = {{"words", vocab_json(m.words)}, {"upos", vocab_json(m.upos)}, {"xpos", vocab_json(m.xpos)},
               {"deprels", vocab_json(m.deprels)}};
    s.params = m.parameters();
  } else if (proc == "charlm") {
    CharLmPair& lm = *pkg.charlm;
    s.hyper = {{"forward", charlm_hyper(lm.forward)}, {"backward", charlm_hyper(lm.backward)}};
    s.vocab = {{"forward", chars_json(lm.forward.chars)}, {"backward", chars_json(lm.backward.chars)}};
    prefixed(s.params, "forward.", lm.forward.parameters());
    prefixed(s.params, "backward.", lm.backward.parameters());
  } else if (proc == "ner") {
    NerModel& m = *pkg.ner;
    const auto& c = m.config;
    s.hyper = {{"mode", m.mode == NerMode::kBaseline ? "baseline" : "charlm"},
               {"word_dim", c.word_dim},
               {"hidden_dim", c.hidden_dim},
               {"char_dim", c.char_dim},
               {"char_hidden_dim", c.char_hidden_dim},
               {"epochs", c.epochs},
               {"word_dropout", c.word_dropout},
               {"adam", adam_json(c.adam)}};
    s.vocab = {{"words", vocab_json(m.words)}, {"tags", vocab_json(m.tags)}, {"chars", chars_json(m.chars)}};
    s.params = m.parameters();
    if (m.mode == NerMode::kCharLm) {
      s.hyper["forward_lm"] = charlm_hyper(m.forward_lm);
      s.hyper["backward_lm"] = charlm_hyper(m.backward_lm);
      s.vocab["forward_lm"] = chars_json(m.forward_lm.chars);
      s.vocab["backward_lm"] = chars_json(m.backward_lm.chars);
      prefixed(s.params, "forward_lm.", m.forward_lm.parameters());
      prefixed(s.params, "backward_lm.", m.backward_lm.parameters());
    }
  } else {
    throw PackageError("unknown processor '" + proc + "'");
  }
  return s;
}

// Builds an empty model of the right shape and returns its parameters.
ParamList instantiate(ModelPackage& pkg, const std::string& proc, const json& hyper, const json& vocab,
                      Parameter& extra) {
  if (proc == "tokenize") {
    SegmenterConfig c;
    c.embedding_dim = hyper.at("embedding_dim");
    c.hidden_dim = hyper.at("hidden_dim");
    c.window = hyper.at("window");
    c.train_window = hyper.at("train_window");
    c.epochs = hyper.at("epochs");
    c.batch_size = hyper.at("batch_size");
    c.adam = adam_from(hyper.at("adam"));
    pkg.tokenize.emplace(c, chars_from(vocab.at("chars")));
    return pkg.tokenize->parameters();
  }
  if (proc == "pos") {
    TaggerConfig c;
    c.word_dim = hyper.at("word_dim");
    c.upos_dim = hyper.at("upos_dim");
    c.hidden_dim = hyper.at("hidden_dim");
    c.epochs = hyper.at("epochs");
    c.word_dropout = hyper.at("word_dropout");
    c.adam = adam_from(hyper.at("adam"));
    std::optional<WordVectors> vectors;
    const std::size_t dim = hyper.at("vectors_dim");
    if (dim > 0) {
      vectors.emplace();
      vectors->words = vocab_from(vocab.at("vector_words"));
      vectors->table = Tensor(Shape{vectors->words.size(), dim});
    }
    pkg.pos.emplace(c, vocab_from(vocab.at("words")), vocab_from(vocab.at("upos")), vocab_from(vocab.at("xpos")),
                    std::move(vectors));
    ParamList out = pkg.pos->parameters();
    if (pkg.pos->vectors) {
      extra.value = pkg.pos->vectors->table;
      out.emplace_back("external_vectors", &extra);
    }
    return out;
  }
  if (proc == "lemma") {
    LemmatizerConfig c;
    c.char_dim = hyper.at("char_dim");
    c.upos_dim = hyper.at("upos_dim");
    c.encoder_dim = hyper.at("encoder_dim");
    c.decoder_dim = hyper.at("decoder_dim");
    c.attention_dim = hyper.at("attention_dim");
    c.epochs = hyper.at("epochs");
    c.adam = adam_from(hyper.at("adam"));
    pkg.lemma.emplace();
    for (const auto& e : vocab.at("lexicon_form_upos")) {
      pkg.lemma->lexicon.by_form_upos[{e.at(0).get<std::string>(), e.at(1).get<std::string>()}] = e.at(2);
    }
    for (const auto& e : vocab.at("lexicon_form")) pkg.lemma->lexicon.by_form[e.at(0).get<std::string>()] = e.at(1);
    pkg.lemma->seq2seq = LemmaSeq2Seq(c, chars_from(vocab.at("chars")), vocab_from(vocab.at("upos")));
    return pkg.lemma->seq2seq.parameters();
  }
  if (proc == "depparse") {
    ParserConfig c;
    c.word_dim = hyper.at("word_dim");
    c.tag_dim = hyper.at("tag_dim");
    c.hidden_dim = hyper.at("hidden_dim");
    c.arc_dim = hyper.at("arc_dim");
    c.rel_dim = hyper.at("rel_dim");
    c.epochs = hyper.at("epochs");
    c.word_dropout = hyper.at("word_dropout");
    c.adam = adam_from(hyper.at("adam"));
    pkg.depparse.emplace(c, vocab_from(vocab.at("words")), vocab_from(vocab.at("upos")),
                         vocab_from(vocab.at("xpos")), vocab_from(vocab.at("deprels")));
    return pkg.depparse->parameters();
  }
  if (proc == "charlm") {
    pkg.charlm.emplace(CharLmPair{charlm_from(hyper.at("forward"), vocab.at("forward")),
                                  charlm_from(hyper.at("backward"), vocab.at("backward"))});
    ParamList out;
    prefixed(out, "forward.", pkg.charlm->forward.parameters());
    prefixed(out, "backward.", pkg.charlm->backward.parameters());
    return out;
  }
  if (proc == "ner") {
    NerConfig c;
    c.word_dim = hyper.at("word_dim");
    c.hidden_dim = hyper.at("hidden_dim");
    c.char_dim = hyper.at("char_dim");
    c.char_hidden_dim = hyper.at("char_hidden_dim");
    c.epochs = hyper.at("epochs");
    c.word_dropout = hyper.at("word_dropout");
    c.adam = adam_from(hyper.at("adam"));
    const NerMode mode = hyper.at("mode") == "baseline" ? NerMode::kBaseline : NerMode::kCharLm;
    CharLm f, b;
    if (mode == NerMode::kCharLm) {
      f = charlm_from(hyper.at("forward_lm"), vocab.at("forward_lm"));
      b = charlm_from(hyper.at("backward_lm"), vocab.at("backward_lm"));
    }
    pkg.ner.emplace(c, mode, vocab_from(vocab.at("words")), vocab_from(vocab.at("tags")), std::move(f), std::move(b),
                    chars_from(vocab.at("chars")));
    ParamList out = pkg.ner->parameters();
    if (mode == NerMode::kCharLm) {
      prefixed(out, "forward_lm.", pkg.ner->forward_lm.parameters());
      prefixed(out, "backward_lm.", pkg.ner->backward_lm.parameters());
    }
    return out;
  }
  throw PackageError("unknown processor '" + proc + "'");
}

}  // namespace

void save_package(const ModelPackage& package, const fs::path& dir) {
  ModelPackage& pkg = const_cast<ModelPackage&>(package);
  fs::create_directories(dir);
  json manifest = {{"schema_version", kSchemaVersion},
                   {"name", pkg.name},
                   {"version", pkg.version},
                   {"processors", json::object()}};
  for (const std::string& proc : pkg.processors()) {
    Serialized s = serialize(pkg, proc);
    const std::string weights = encode_weights(s.params);
    const std::string vocab = s.vocab.dump(1) + "\n";
    const std::string wfile = proc + ".weights";
    const std::string vfile = proc + ".vocab.json";
    write_file(dir / wfile, weights);
    write_file(dir / vfile, vocab);
    manifest["processors"][proc] = {{"weights", wfile},
                                    {"weights_sha256", sha256_hex(weights)},
                                    {"vocab", vfile},
                                    {"vocab_sha256", sha256_hex(vocab)},
                                    {"hyperparameters", s.hyper}};
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

ModelPackage load_package(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.json";
  if (!fs::exists(mpath)) throw PackageError(mpath.string() + ": no manifest");
  json manifest;
  try {
    manifest = json::parse(read_file(mpath));
  } catch (const json::exception& e) {
    throw PackageError(mpath.string() + ": " + e.what());
  }
  if (!manifest.contains("schema_version") || manifest["schema_version"] != kSchemaVersion) {
    throw PackageError(mpath.string() + ": unsupported schema_version (expected " + std::to_string(kSchemaVersion) +
                       ")");
  }
  ModelPackage pkg;
  try {
    pkg.name = manifest.at("name");
    pkg.version = manifest.at("version");
    for (const auto& [proc, entry] : manifest.at("processors").items()) {
      const fs::path wpath = dir / entry.at("weights").get<std::string>();
      const fs::path vpath = dir / entry.at("vocab").get<std::string>();
      for (const auto& p : {wpath, vpath}) {
        if (!fs::exists(p)) throw PackageError("processor '" + proc + "': missing file " + p.string());
      }
      const std::string weights = read_file(wpath);
      const std::string vocab = read_file(vpath);
      if (sha256_hex(weights) != entry.at("weights_sha256")) {
        throw PackageError(wpath.string() + ": checksum mismatch");
      }
      if (sha256_hex(vocab) != entry.at("vocab_sha256")) throw PackageError(vpath.string() + ": checksum mismatch");
      Parameter extra;
      const ParamList params = instantiate(pkg, proc, entry.at("hyperparameters"), json::parse(vocab), extra);
      decode_weights(weights, params, wpath.string());
      if (proc == "pos" && pkg.pos->vectors) pkg.pos->vectors->table = extra.value;
    }
  } catch (const json::exception& e) {
    throw PackageError(mpath.string() + ": malformed manifest or vocabulary: " + e.what());
  } catch (const DataError& e) {
    throw PackageError(dir.string() + ": " + e.what());
  }
  return pkg;
}

std::vector<std::string> list_packages(const fs::path& registry) {
  std::vector<std::string> out;
  if (!fs::is_directory(registry)) return out;
  for (const auto& entry : fs::directory_iterator(registry)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      out.push_back(entry.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path resolve_registry(const std::optional<std::string>& explicit_path) {
  if (explicit_path) return *explicit_path;
  if (const char* env = std::getenv("BIOPIPE_REGISTRY"); env && *env) return env;
  return "registry";
}

fs::path package_path(const fs::path& registry, const std::string& name) {
  if (name.find('/') != std::string::npos && fs::exists(fs::path(name) / "manifest.json")) return name;
  const fs::path p = registry / name;
  if (fs::exists(p / "manifest.json")) return p;
  std::string available;
  for (const std::string& n : list_packages(registry)) available += (available.empty() ? "" : ", ") + n;
  throw ConfigError("unknown package '" + name + "' in registry " + registry.string() +
                    "; available: " + (available.empty() ? "(none)" : available));
}

}  // namespace biopipe
