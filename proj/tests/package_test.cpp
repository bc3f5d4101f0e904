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

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <json.hpp>

#include "biopipe/corpus.hpp"
#include "biopipe/error.hpp"
#include "biopipe/package.hpp"
#include "biopipe/pipeline.hpp"
#include "toy_package.hpp"

namespace biopipe {
namespace {

namespace fs = std::filesystem;
using testing::scratch_dir;

const ModelPackage& shared_package() {
  static const ModelPackage pkg = testing::tiny_package();
  return pkg;
}

const std::vector<std::string> kTexts = {"She didn't go.", "The cells grew. Cells did that.",
                                         "The patient had a sore throat.", "", "Unseen wörds here ."};

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

void append_le(std::string& out, const void* p, std::size_t n) {
  out.append(static_cast<const char*>(p), n);
}

TEST(Weights, ByteLayout) {
  static_assert(std::endian::native == std::endian::little);
  Parameter a(Shape{2});
  a.value = Tensor::vector({1.5, -2.0});
  Parameter b(Shape{1, 1});
  b.value = Tensor::matrix(1, 1, {0.25});
  const ParamList params = {{"a", &a}, {"bb", &b}};

  std::string expected = "BPW1";
  const std::uint32_t count = 2, one = 1, two = 2;
  append_le(expected, &count, 4);
  append_le(expected, &one, 4);
  expected += "a";
  append_le(expected, &one, 4);
  append_le(expected, &two, 4);
  const float fa[] = {1.5f, -2.0f};
  append_le(expected, fa, 8);
  append_le(expected, &two, 4);
  expected += "bb";
  append_le(expected, &two, 4);
  append_le(expected, &one, 4);
  append_le(expected, &one, 4);
  const float fb = 0.25f;
  append_le(expected, &fb, 4);
  EXPECT_EQ(encode_weights(params), expected);
}

TEST(Weights, FuzzedRoundTripIsExact) {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Parameter> store(1 + rng.below(4));
    ParamList params;
    for (std::size_t i = 0; i < store.size(); ++i) {
      const std::size_t rank = 1 + rng.below(3);
      std::vector<std::size_t> dims;
      for (std::size_t r = 0; r < rank; ++r) dims.push_back(1 + rng.below(4));
      store[i] = Parameter(Shape::of_rank(rank, dims.data()));
      for (double& v : store[i].value.data()) v = static_cast<float>(rng.uniform(-1e3, 1e3));
      params.emplace_back("p" + std::to_string(i), &store[i]);
    }
    const std::string bytes = encode_weights(params);
    std::vector<Parameter> copy = store;
    ParamList targets;
    for (std::size_t i = 0; i < copy.size(); ++i) {
      copy[i].value.fill(0.0);
      targets.emplace_back(params[i].first, &copy[i]);
    }
    decode_weights(bytes, targets, "fuzz");
    for (std::size_t i = 0; i < copy.size(); ++i) {
      const auto got = copy[i].value.data(), want = store[i].value.data();
      ASSERT_TRUE(std::equal(got.begin(), got.end(), want.begin(), want.end())) << "trial " << trial;
    }
    ASSERT_EQ(encode_weights(targets), bytes);
  }
}

TEST(Weights, RejectsShapeSkewAndTruncation) {
  Parameter a(Shape{2});
  const std::string bytes = encode_weights({{"a", &a}});
  Parameter wrong(Shape{3});
  EXPECT_THROW(decode_weights(bytes, {{"a", &wrong}}, "w"), PackageError);
  EXPECT_THROW(decode_weights(bytes, {{"b", &a}}, "w"), PackageError);
  EXPECT_THROW(decode_weights(bytes.substr(0, bytes.size() - 1), {{"a", &a}}, "w"), PackageError);
  EXPECT_THROW(decode_weights("XXXX", {{"a", &a}}, "w"), PackageError);
  Parameter extra(Shape{1});
  EXPECT_THROW(decode_weights(bytes, {{"a", &a}, {"z", &extra}}, "w"), PackageError);
}

TEST(Package, RoundTripGivesIdenticalAnnotations) {
  const fs::path dir = scratch_dir("pkg");
  save_package(shared_package(), dir);
  const ModelPackage loaded = load_package(dir);
  EXPECT_EQ(loaded.name, "tiny");
  EXPECT_EQ(loaded.processors(), shared_package().processors());

  const auto original = std::make_shared<const ModelPackage>(shared_package());
  const Pipeline a = pipeline_from_package(original, {});
  const Pipeline b = pipeline_from_package(std::make_shared<const ModelPackage>(loaded), {});
  for (const std::string& text : kTexts) EXPECT_EQ(annotate(a, text), annotate(b, text)) << text;

  // Saving the loaded package reproduces every file byte for byte.
  const fs::path again = scratch_dir("again");
  save_package(loaded, again);
  for (const auto& entry : fs::directory_iterator(dir)) {
    EXPECT_EQ(read_file(entry.path()), read_file(again / entry.path().filename())) << entry.path();
  }
}

TEST(Package, ManifestRecordsChecksumsAndHyperparameters) {
  const fs::path dir = scratch_dir("pkg");
  save_package(shared_package(), dir);
  const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  EXPECT_EQ(manifest["schema_version"], 1);
  EXPECT_EQ(manifest["name"], "tiny");
  for (const std::string& proc : shared_package().processors()) {
    const auto& entry = manifest["processors"][proc];
    EXPECT_EQ(entry["weights_sha256"], sha256_hex(read_file(dir / entry["weights"].get<std::string>())));
    EXPECT_EQ(entry["vocab_sha256"], sha256_hex(read_file(dir / entry["vocab"].get<std::string>())));
    EXPECT_TRUE(entry["hyperparameters"].is_object());
  }
  EXPECT_EQ(manifest["processors"]["depparse"]["hyperparameters"]["hidden_dim"], 6);
}

TEST(Package, CorruptedWeightsNameTheFile) {
  const fs::path dir = scratch_dir("pkg");
  save_package(shared_package(), dir);
  std::string bytes = read_file(dir / "pos.weights");
  bytes[bytes.size() / 2] ^= 0x01;
  write_file(dir / "pos.weights", bytes);
  try {
    load_package(dir);
    FAIL() << "expected a checksum error";
  } catch (const PackageError& e) {
    EXPECT_NE(std::string(e.what()).find("pos.weights"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
  }
}

TEST(Package, AbsentProcessorFileAndSchemaSkewFail) {
  const fs::path dir = scratch_dir("pkg");
  save_package(shared_package(), dir);
  fs::remove(dir / "lemma.weights");
  EXPECT_THROW(load_package(dir), PackageError);

  const fs::path skew = scratch_dir("skew");
  save_package(shared_package(), skew);
  auto manifest = nlohmann::json::parse(read_file(skew / "manifest.json"));
  manifest["schema_version"] = 2;
  write_file(skew / "manifest.json", manifest.dump());
  EXPECT_THROW(load_package(skew), PackageError);

  EXPECT_THROW(load_package(scratch_dir("empty")), PackageError);
}

TEST(Package, ManifestListingUnknownProcessorFails) {
  const fs::path dir = scratch_dir("pkg");
  save_package(shared_package(), dir);
  auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  manifest["processors"]["sentiment"] = manifest["processors"]["pos"];
  write_file(dir / "manifest.json", manifest.dump());
  EXPECT_THROW(load_package(dir), PackageError);
}

TEST(Registry, ListsAndResolvesPackages) {
  const fs::path reg = scratch_dir("reg");
  ModelPackage a = shared_package();
  a.name = "toy-a";
  save_package(a, reg / "toy-a");
  save_package(a, reg / "toy-b");
  fs::create_directories(reg / "not-a-package");
  EXPECT_EQ(list_packages(reg), (std::vector<std::string>{"toy-a", "toy-b"}));
  EXPECT_EQ(package_path(reg, "toy-b"), reg / "toy-b");
  try {
    package_path(reg, "toy-c");
    FAIL() << "expected a configuration error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("toy-a, toy-b"), std::string::npos) << e.what();
  }
  EXPECT_TRUE(list_packages(reg / "missing").empty());
}

TEST(Registry, EnvironmentVariableIsTheFallback) {
  EXPECT_EQ(resolve_registry(std::string("/x")), fs::path("/x"));
  ::setenv("BIOPIPE_REGISTRY", "/from/env", 1);
  EXPECT_EQ(resolve_registry(std::nullopt), fs::path("/from/env"));
  ::unsetenv("BIOPIPE_REGISTRY");
  EXPECT_EQ(resolve_registry(std::nullopt), fs::path("registry"));
}

}  // namespace
}  // namespace biopipe
