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

// Test-only oracles. Nothing here calls the code paths it is used to check.

#ifndef BIOPIPE_TESTS_ORACLES_HPP_
#define BIOPIPE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "biopipe/core/graph.hpp"
#include "biopipe/core/params.hpp"
#include "biopipe/bioes.hpp"
#include "biopipe/document.hpp"

namespace biopipe {

// Readable gtest output for span types.
inline void PrintTo(const Span& s, std::ostream* os) { *os << "[" << s.start << "," << s.end << ")"; }
inline void PrintTo(const TaggedSpan& s, std::ostream* os) {
  *os << s.type << "[" << s.start << "," << s.end << ")";
}

}  // namespace biopipe

namespace biopipe::testing {

// Calls visit(path) for every label path of the given length over k labels,
// in lexicographic order.
inline void for_each_path(std::size_t length, std::size_t k,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> path(length, 0);
  while (true) {
    visit(path);
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++path[i] < k) break;
      path[i] = 0;
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

// Path score written directly from the CRF definition.
inline double brute_path_score(const Tensor& e, const CrfParams& p, const std::vector<std::size_t>& y) {
  double s = p.start.value[y[0]] + e.at(0, y[0]);
  for (std::size_t t = 1; t < y.size(); ++t) {
    s = s + p.transitions.value.at(y[t - 1], y[t]) + e.at(t, y[t]);
  }
  return s + p.stop.value[y.back()];
}

struct BruteCrf {
  double log_partition;
  double best_score;
  std::vector<std::size_t> best_path;
};

inline BruteCrf brute_crf(const Tensor& e, const CrfParams& p) {
  std::vector<double> scores;
  BruteCrf r{0, -std::numeric_limits<double>::infinity(), {}};
  for_each_path(e.dim(0), p.num_labels, [&](const std::vector<std::size_t>& y) {
    const double s = brute_path_score(e, p, y);
    scores.push_back(s);
    if (s > r.best_score) {
      r.best_score = s;
      r.best_path = y;
    }
  });
  const double m = *std::max_element(scores.begin(), scores.end());
  double z = 0;
  for (const double s : scores) z += std::exp(s - m);
  r.log_partition = m + std::log(z);
  return r;
}

// True when heads (index 0 unused) form a tree rooted at 0 with exactly one
// child of the root.
inline bool is_single_root_tree(const std::vector<int>& heads) {
  const std::size_t n = heads.size() - 1;
  int roots = 0;
  for (std::size_t d = 1; d <= n; ++d) {
    if (heads[d] < 0 || heads[d] > static_cast<int>(n) || heads[d] == static_cast<int>(d)) return false;
    if (heads[d] == 0) ++roots;
  }
  if (roots != 1) return false;
  for (std::size_t d = 1; d <= n; ++d) {
    std::size_t steps = 0;
    int cur = static_cast<int>(d);
    while (cur != 0) {
      cur = heads[cur];
      if (++steps > n) return false;
    }
  }
  return true;
}

struct BruteTree {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> heads;
};

// Exhaustive search over all head assignments; scores.at(h, d).
inline BruteTree brute_mst(const std::vector<std::vector<double>>& scores) {
  const std::size_t n = scores.size() - 1;
  BruteTree r;
  std::vector<int> heads(n + 1, 0);
  std::vector<std::size_t> digits(n, 0);
  for_each_path(n, n + 1, [&](const std::vector<std::size_t>& y) {
    for (std::size_t d = 1; d <= n; ++d) heads[d] = static_cast<int>(y[d - 1]);
    if (!is_single_root_tree(heads)) return;
    double total = 0;
    for (std::size_t d = 1; d <= n; ++d) total += scores[heads[d]][d];
    if (total > r.best) {
      r.best = total;
      r.heads = heads;
    }
  });
  return r;
}

struct GradCheckResult {
  std::size_t checked = 0;
  double worst_relative = 0;
  std::string worst_param;
};

// Compares analytic gradients against central finite differences for every
// scalar of every parameter. loss(g) must build its loss on g and return it.
// The relative error uses max(|analytic|, |numeric|, floor) as denominator.
inline GradCheckResult check_gradients(const ParamList& params, const std::function<Var(Graph&)>& loss,
                                       double step = 1e-5, double floor = 1e-3) {
  zero_grads(params);
  {
    Graph g;
    g.backward(loss(g));
  }
  GradCheckResult r;
  for (const auto& [name, p] : params) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double orig = p->value[i];
      p->value[i] = orig + step;
      double plus, minus;
      {
        Graph g;
        plus = g.value(loss(g)).item();
      }
      p->value[i] = orig - step;
      {
        Graph g;
        minus = g.value(loss(g)).item();
      }
      p->value[i] = orig;
      const double numeric = (plus - minus) / (2 * step);
      const double analytic = p->grad[i];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), floor});
      const double rel = std::abs(numeric - analytic) / denom;
      ++r.checked;
      if (rel > r.worst_relative) {
        r.worst_relative = rel;
        r.worst_param = name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return r;
}

}  // namespace biopipe::testing

#endif  // BIOPIPE_TESTS_ORACLES_HPP_
