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

#ifndef BIOPIPE_TESTS_FIXTURES_HPP_
#define BIOPIPE_TESTS_FIXTURES_HPP_

#include <string>

#include "biopipe/corpus.hpp"

namespace biopipe::testing {

// Small fully annotated treebank with spans.
inline const char* kTinyConllu =
    "# text = She didn't go.\n"
    "1\tShe\tshe\tPRON\tPRP\t_\t3\tnsubj\t_\t_\n"
    "2\tdid\tdo\tAUX\tVBD\t_\t3\taux\t_\tSpaceAfter=No\n"
    "3\tn't\tnot\tPART\tRB\t_\t0\troot\t_\t_\n"
    "\n"
    "# text = The cells grew.\n"
    "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
    "2\tcells\tcell\tNOUN\tNNS\t_\t3\tnsubj\t_\t_\n"
    "3\tgrew\tgrow\tVERB\tVBD\t_\t0\troot\t_\tSpaceAfter=No\n"
    "4\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\t_\n"
    "\n"
    "1\tCells\tcell\tNOUN\tNNS\t_\t2\tnsubj\t_\t_\n"
    "2\tdid\tdo\tVERB\tVBD\t_\t0\troot\t_\t_\n"
    "3\tthat\tthat\tPRON\tDT\t_\t2\tobj\t_\tSpaceAfter=No\n"
    "4\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\t_\n"
    "\n";

inline Treebank tiny_treebank() {
  Treebank tb = read_conllu(kTinyConllu);
  attach_spans(tb);
  return tb;
}

// First sentence only: three words, used by gradient checks.
inline Sentence three_words() { return read_conllu(kTinyConllu).sentences.at(0); }

}  // namespace biopipe::testing

#endif  // BIOPIPE_TESTS_FIXTURES_HPP_
