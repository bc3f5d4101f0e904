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

#include "biopipe/core/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace biopipe {

namespace {

void check(const Tensor& e, const CrfParams& p) {
  if (e.rank() != 2 || e.dim(1) != p.num_labels) {
    throw ShapeError("crf: emissions " + e.shape().str() + " do not match " +
                     std::to_string(p.num_labels) + " labels");
  }
  if (e.dim(0) == 0) throw DomainError("crf: empty sequence");
}

double log_sum_exp(const double* v, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

// alpha.at(t, k): log score of all prefixes ending in k at t, emissions
// through t included.
Tensor forward_scores(const Tensor& e, const CrfParams& p) {
  const std::size_t len = e.dim(0), k = p.num_labels;
  const Tensor& tr = p.transitions.value;
  Tensor alpha(Shape{len, k});
  for (std::size_t y = 0; y < k; ++y) alpha.at(0, y) = p.start.value[y] + e.at(0, y);
  std::vector<double> tmp(k);
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t x = 0; x < k; ++x) tmp[x] = alpha.at(t - 1, x) + tr.at(x, y);
      alpha.at(t, y) = log_sum_exp(tmp.data(), k) + e.at(t, y);
    }
  }
  return alpha;
}

}  // namespace

double crf_path_score(const Tensor& e, const CrfParams& p, std::span<const std::size_t> path) {
  check(e, p);
  if (path.size() != e.dim(0)) throw ShapeError("crf_path_score: path length mismatch");
  double s = p.start.value[path[0]] + e.at(0, path[0]);
  for (std::size_t t = 1; t < path.size(); ++t) {
    s = s + p.transitions.value.at(path[t - 1], path[t]) + e.at(t, path[t]);
  }
  return s + p.stop.value[path.back()];
}

double crf_log_partition(const Tensor& e, const CrfParams& p) {
  check(e, p);
  const Tensor alpha = forward_scores(e, p);
  const std::size_t len = e.dim(0), k = p.num_labels;
  std::vector<double> fin(k);
  for (std::size_t y = 0; y < k; ++y) fin[y] = alpha.at(len - 1, y) + p.stop.value[y];
  return log_sum_exp(fin.data(), k);
}

ViterbiResult crf_viterbi(const Tensor& e, const CrfParams& p) {
  check(e, p);
  const std::size_t len = e.dim(0), k = p.num_labels;
  const Tensor& tr = p.transitions.value;
  std::vector<double> delta(k), next(k);
  std::vector<std::size_t> back(len * k, 0);
  for (std::size_t y = 0; y < k; ++y) delta[y] = p.start.value[y] + e.at(0, y);
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      std::size_t arg = 0;
      double best = delta[0] + tr.at(0, y);
      for (std::size_t x = 1; x < k; ++x) {
        const double s = delta[x] + tr.at(x, y);
        if (s > best) best = s, arg = x;
      }
      next[y] = best + e.at(t, y);
      back[t * k + y] = arg;
    }
    std::swap(delta, next);
  }
  std::size_t arg = 0;
  double best = delta[0] + p.stop.value[0];
  for (std::size_t y = 1; y < k; ++y) {
    const double s = delta[y] + p.stop.value[y];
    if (s > best) best = s, arg = y;
  }
  ViterbiResult r;
  r.score = best;
  r.path.assign(len, 0);
  r.path[len - 1] = arg;
  for (std::size_t t = len - 1; t > 0; --t) r.path[t - 1] = back[t * k + r.path[t]];
  return r;
}

CrfMarginals crf_marginals(const Tensor& e, const CrfParams& p) {
  check(e, p);
  const std::size_t len = e.dim(0), k = p.num_labels;
  const Tensor& tr = p.transitions.value;
  const Tensor alpha = forward_scores(e, p);
  // beta.at(t, y): log score of all suffixes after t given y at t, stop included.
  Tensor beta(Shape{len, k});
  for (std::size_t y = 0; y < k; ++y) beta.at(len - 1, y) = p.stop.value[y];
  std::vector<double> tmp(k);
  for (std::size_t t = len - 1; t > 0; --t) {
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) tmp[y] = tr.at(x, y) + e.at(t, y) + beta.at(t, y);
      beta.at(t - 1, x) = log_sum_exp(tmp.data(), k);
    }
  }
  for (std::size_t y = 0; y < k; ++y) tmp[y] = alpha.at(len - 1, y) + p.stop.value[y];
  CrfMarginals m;
  m.log_partition = log_sum_exp(tmp.data(), k);
  m.unary = Tensor(Shape{len, k});
  m.pair = Tensor(Shape{k, k});
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      m.unary.at(t, y) = std::exp(alpha.at(t, y) + beta.at(t, y) - m.log_partition);
    }
  }
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) {
        m.pair.at(x, y) += std::exp(alpha.at(t - 1, x) + tr.at(x, y) + e.at(t, y) + beta.at(t, y) -
                                    m.log_partition);
      }
    }
  }
  return m;
}

}  // namespace biopipe
