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

#ifndef BIOPIPE_CORE_CRF_HPP_
#define BIOPIPE_CORE_CRF_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "biopipe/core/params.hpp"
#include "biopipe/core/tensor.hpp"

namespace biopipe {

// Score of one label path: start + emissions + transitions + stop, summed
// left to right in the same order crf_viterbi accumulates it.
double crf_path_score(const Tensor& emissions, const CrfParams& p, std::span<const std::size_t> path);

// log sum over all label paths of exp(path score). Throws DomainError when
// the sequence is empty.
double crf_log_partition(const Tensor& emissions, const CrfParams& p);

struct ViterbiResult {
  std::vector<std::size_t> path;
  double score = 0.0;
};

// Highest-scoring path. On ties the lowest label index wins at every
// backpointer and at the final choice.
ViterbiResult crf_viterbi(const Tensor& emissions, const CrfParams& p);

struct CrfMarginals {
  double log_partition = 0.0;
  Tensor unary;  // L x K, P(y_t = k)
  Tensor pair;   // K x K, sum over t of P(y_{t-1} = a, y_t = b)
};

CrfMarginals crf_marginals(const Tensor& emissions, const CrfParams& p);

}  // namespace biopipe

#endif  // BIOPIPE_CORE_CRF_HPP_
