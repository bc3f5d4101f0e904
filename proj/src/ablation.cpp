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

#include "biopipe/ablation.hpp"

#include <cstdio>

#include "biopipe/bioes.hpp"
#include "biopipe/error.hpp"

namespace biopipe {

Score ner_score(const NerModel& model, const std::vector<TaggedSentence>& corpus) {
  std::vector<std::vector<TaggedSpan>> system, gold;
  for (const TaggedSentence& s : corpus) {
    system.push_back(recognize(model, s.tokens));
    gold.push_back(decode_bioes(s.tags));
  }
  return entity_f1(system, gold);
}

AblationResult charlm_ablation(const std::vector<TaggedSentence>& train, const std::vector<TaggedSentence>& dev,
                               const CharLm& fwd, const CharLm& bwd, const NerConfig& config, std::uint64_t seed) {
  if (dev.empty()) throw DataError("ablation needs a non-empty dev set");
  AblationResult out;
  out.charlm = ner_score(train_ner(train, fwd, bwd, config, seed, NerMode::kCharLm), dev);
  out.baseline = ner_score(train_ner(train, fwd, bwd, config, seed, NerMode::kBaseline), dev);
  char buf[128];
  out.table = "Model\tP\tR\tF1\n";
  for (const auto& [name, s] : {std::pair{"charlm", out.charlm}, std::pair{"baseline", out.baseline}}) {
    std::snprintf(buf, sizeof buf, "%s\t%.2f\t%.2f\t%.2f\n", name, 100 * s.precision(), 100 * s.recall(),
                  100 * s.f1());
    out.table += buf;
  }
  std::snprintf(buf, sizeof buf, "gain=%+.2f\n", 100 * (out.charlm.f1() - out.baseline.f1()));
  out.table += buf;
  return out;
}

}  // namespace biopipe
