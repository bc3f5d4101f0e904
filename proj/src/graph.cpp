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

#include "biopipe/core/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "biopipe/core/crf.hpp"

namespace biopipe {

namespace {

double sigmoid_of(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_vector(const Tensor& t, const char* what) {
  if (t.rank() != 1) throw ShapeError(std::string(what) + ": expected a vector, got " + t.shape().str());
}

void require_matrix(const Tensor& t, const char* what) {
  if (t.rank() != 2) throw ShapeError(std::string(what) + ": expected a matrix, got " + t.shape().str());
}

void require_len(const Tensor& t, std::size_t n, const char* what) {
  require_vector(t, what);
  if (t.dim(0) != n) {
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                     std::to_string(t.dim(0)));
  }
}

}  // namespace

Var Graph::push(Tensor value, bool requires_grad, std::function<void()> back) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

const Tensor& Graph::val(int id) const {
  const Node& n = nodes_[id];
  return n.ext_value ? *n.ext_value : n.value;
}

const Tensor& Graph::value(Var v) const { return val(v.id); }

Tensor& Graph::grad(int id) {
  Node& n = nodes_[id];
  if (n.ext_grad) return *n.ext_grad;
  if (n.grad.size() != n.value.size() || n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

Var Graph::constant(Tensor value) { return push(std::move(value), false); }

Var Graph::param(Parameter& p) {
  for (const auto& [ptr, id] : param_nodes_) {
    if (ptr == &p) return Var{id};
  }
  Node n;
  n.ext_value = &p.value;
  n.ext_grad = &p.grad;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  const int id = static_cast<int>(nodes_.size() - 1);
  param_nodes_.emplace_back(&p, id);
  return Var{id};
}

Var Graph::lookup(Parameter& table, std::size_t r) {
  const Tensor& t = table.value;
  require_matrix(t, "lookup");
  if (r >= t.dim(0)) throw ShapeError("lookup: row " + std::to_string(r) + " out of range");
  const std::size_t d = t.dim(1);
  Tensor out(Shape{d});
  std::copy(t.row(r), t.row(r) + d, out.ptr());
  Parameter* pt = &table;
  int id = static_cast<int>(nodes_.size());
  return push(std::move(out), true, [this, pt, r, d, id] {
    const Tensor& g = grad(id);
    double* dst = pt->grad.row(r);
    for (std::size_t k = 0; k < d; ++k) dst[k] += g[k];
  });
}

Var Graph::add(Var a, Var b) {
  const Tensor& x = val(a.id);
  const Tensor& y = val(b.id);
  if (!(x.shape() == y.shape())) throw ShapeError("add: " + x.shape().str() + " vs " + y.shape().str());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(a) || needs(b), [this, a, b, id] {
    const Tensor& g = grad(id);
    for (const Var v : {a, b}) {
      if (!needs(v)) continue;
      Tensor& gv = grad(v.id);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
  });
}

Var Graph::mul(Var a, Var b) {
  const Tensor& x = val(a.id);
  const Tensor& y = val(b.id);
  if (!(x.shape() == y.shape())) throw ShapeError("mul: " + x.shape().str() + " vs " + y.shape().str());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(a) || needs(b), [this, a, b, id] {
    const Tensor& g = grad(id);
    const Tensor& x = val(a.id);
    const Tensor& y = val(b.id);
    if (needs(a)) {
      Tensor& ga = grad(a.id);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i];
    }
    if (needs(b)) {
      Tensor& gb = grad(b.id);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * x[i];
    }
  });
}

Var Graph::sigmoid(Var a) {
  const Tensor& x = val(a.id);
  Tensor out(x.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid_of(x[i]);
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(a), [this, a, id] {
    const Tensor& g = grad(id);
    const Tensor& y = val(id);
    Tensor& ga = grad(a.id);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var Graph::tanh(Var a) {
  const Tensor& x = val(a.id);
  Tensor out(x.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x[i]);
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(a), [this, a, id] {
    const Tensor& g = grad(id);
    const Tensor& y = val(id);
    Tensor& ga = grad(a.id);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Graph::concat(std::span<const Var> parts) {
  std::size_t total = 0;
  bool req = false;
  for (const Var p : parts) {
    require_vector(val(p.id), "concat");
    total += val(p.id).size();
    req = req || needs(p);
  }
  Tensor out(Shape{total});
  std::size_t off = 0;
  for (const Var p : parts) {
    const Tensor& t = val(p.id);
    std::copy(t.ptr(), t.ptr() + t.size(), out.ptr() + off);
    off += t.size();
  }
  const int id = static_cast<int>(nodes_.size());
  std::vector<Var> ps(parts.begin(), parts.end());
  return push(std::move(out), req, [this, ps = std::move(ps), id] {
    const Tensor& g = grad(id);
    std::size_t off = 0;
    for (const Var p : ps) {
      const std::size_t n = val(p.id).size();
      if (needs(p)) {
        Tensor& gp = grad(p.id);
        for (std::size_t i = 0; i < n; ++i) gp[i] += g[off + i];
      }
      off += n;
    }
  });
}

Var Graph::slice(Var a, std::size_t offset, std::size_t length) {
  const Tensor& x = val(a.id);
  require_vector(x, "slice");
  if (offset + length > x.size()) throw ShapeError("slice: range exceeds vector length");
  Tensor out(Shape{length});
  std::copy(x.ptr() + offset, x.ptr() + offset + length, out.ptr());
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(a), [this, a, offset, length, id] {
    const Tensor& g = grad(id);
    Tensor& ga = grad(a.id);
    for (std::size_t i = 0; i < length; ++i) ga[offset + i] += g[i];
  });
}

Var Graph::softmax(Var a) {
  const Tensor& x = val(a.id);
  require_vector(x, "softmax");
  Tensor out(x.shape());
  const double m = *std::max_element(x.ptr(), x.ptr() + x.size());
  double z = 0;
  for (std::size_t i = 0; i < x.size(); ++i) z += (out[i] = std::exp(x[i] - m));
  for (std::size_t i = 0; i < x.size(); ++i) out[i] /= z;
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(a), [this, a, id] {
    const Tensor& g = grad(id);
    const Tensor& y = val(id);
    double dot = 0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
    Tensor& ga = grad(a.id);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += y[i] * (g[i] - dot);
  });
}

Var Graph::sum(Var a) {
  const Tensor& x = val(a.id);
  double s = 0;
  for (const double v : x.data()) s += v;
  const int id = static_cast<int>(nodes_.size());
  return push(Tensor::scalar(s), needs(a), [this, a, id] {
    const double g = grad(id)[0];
    Tensor& ga = grad(a.id);
    for (double& v : ga.data()) v += g;
  });
}

Var Graph::stack(std::span<const Var> rows) {
  if (rows.empty()) throw DomainError("stack: no rows");
  const std::size_t d = val(rows[0].id).size();
  bool req = false;
  for (const Var r : rows) {
    require_len(val(r.id), d, "stack");
    req = req || needs(r);
  }
  Tensor out(Shape{rows.size(), d});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Tensor& t = val(rows[i].id);
    std::copy(t.ptr(), t.ptr() + d, out.row(i));
  }
  const int id = static_cast<int>(nodes_.size());
  std::vector<Var> rs(rows.begin(), rows.end());
  return push(std::move(out), req, [this, rs = std::move(rs), d, id] {
    const Tensor& g = grad(id);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (!needs(rs[i])) continue;
      Tensor& gr = grad(rs[i].id);
      const double* src = g.row(i);
      for (std::size_t k = 0; k < d; ++k) gr[k] += src[k];
    }
  });
}

Var Graph::row(Var m, std::size_t i) {
  const Tensor& x = val(m.id);
  require_matrix(x, "row");
  if (i >= x.dim(0)) throw ShapeError("row: index out of range");
  const std::size_t d = x.dim(1);
  Tensor out(Shape{d});
  std::copy(x.row(i), x.row(i) + d, out.ptr());
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(m), [this, m, i, d, id] {
    const Tensor& g = grad(id);
    double* dst = grad(m.id).row(i);
    for (std::size_t k = 0; k < d; ++k) dst[k] += g[k];
  });
}

Var Graph::matvec(Var m, Var x) {
  const Tensor& a = val(m.id);
  const Tensor& v = val(x.id);
  require_matrix(a, "matvec");
  require_len(v, a.dim(1), "matvec");
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  Tensor out(Shape{rows});
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = a.row(i);
    double s = 0;
    for (std::size_t j = 0; j < cols; ++j) s += r[j] * v[j];
    out[i] = s;
  }
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(m) || needs(x), [this, m, x, rows, cols, id] {
    const Tensor& g = grad(id);
    const Tensor& a = val(m.id);
    const Tensor& v = val(x.id);
    if (needs(m)) {
      Tensor& ga = grad(m.id);
      for (std::size_t i = 0; i < rows; ++i) {
        double* r = ga.row(i);
        for (std::size_t j = 0; j < cols; ++j) r[j] += g[i] * v[j];
      }
    }
    if (needs(x)) {
      Tensor& gx = grad(x.id);
      for (std::size_t i = 0; i < rows; ++i) {
        const double* r = a.row(i);
        for (std::size_t j = 0; j < cols; ++j) gx[j] += g[i] * r[j];
      }
    }
  });
}

Var Graph::weighted_rows(Var m, Var w) {
  const Tensor& a = val(m.id);
  const Tensor& v = val(w.id);
  require_matrix(a, "weighted_rows");
  require_len(v, a.dim(0), "weighted_rows");
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  Tensor out(Shape{cols});
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = a.row(i);
    for (std::size_t j = 0; j < cols; ++j) out[j] += v[i] * r[j];
  }
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(m) || needs(w), [this, m, w, rows, cols, id] {
    const Tensor& g = grad(id);
    const Tensor& a = val(m.id);
    const Tensor& v = val(w.id);
    if (needs(m)) {
      Tensor& ga = grad(m.id);
      for (std::size_t i = 0; i < rows; ++i) {
        double* r = ga.row(i);
        for (std::size_t j = 0; j < cols; ++j) r[j] += v[i] * g[j];
      }
    }
    if (needs(w)) {
      Tensor& gw = grad(w.id);
      for (std::size_t i = 0; i < rows; ++i) {
        const double* r = a.row(i);
        double s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += r[j] * g[j];
        gw[i] += s;
      }
    }
  });
}

Var Graph::add_row(Var m, Var v) {
  const Tensor& a = val(m.id);
  const Tensor& b = val(v.id);
  require_matrix(a, "add_row");
  require_len(b, a.dim(1), "add_row");
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  Tensor out = a;
  for (std::size_t i = 0; i < rows; ++i) {
    double* r = out.row(i);
    for (std::size_t j = 0; j < cols; ++j) r[j] += b[j];
  }
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), needs(m) || needs(v), [this, m, v, rows, cols, id] {
    const Tensor& g = grad(id);
    if (needs(m)) {
      Tensor& ga = grad(m.id);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (needs(v)) {
      Tensor& gb = grad(v.id);
      for (std::size_t i = 0; i < rows; ++i) {
        const double* r = g.row(i);
        for (std::size_t j = 0; j < cols; ++j) gb[j] += r[j];
      }
    }
  });
}

Var Graph::affine(Var x, Linear& layer) {
  const Tensor& v = val(x.id);
  const Tensor& w = layer.w.value;
  const std::size_t rows = w.dim(0), cols = w.dim(1);
  require_len(v, cols, "affine");
  Tensor out(Shape{rows});
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = w.row(i);
    double s = layer.b.value[i];
    for (std::size_t j = 0; j < cols; ++j) s += r[j] * v[j];
    out[i] = s;
  }
  Linear* lp = &layer;
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), true, [this, x, lp, rows, cols, id] {
    const Tensor& g = grad(id);
    const Tensor& v = val(x.id);
    Tensor& gw = lp->w.grad;
    for (std::size_t i = 0; i < rows; ++i) {
      double* r = gw.row(i);
      for (std::size_t j = 0; j < cols; ++j) r[j] += g[i] * v[j];
      lp->b.grad[i] += g[i];
    }
    if (needs(x)) {
      Tensor& gx = grad(x.id);
      const Tensor& w = lp->w.value;
      for (std::size_t i = 0; i < rows; ++i) {
        const double* r = w.row(i);
        for (std::size_t j = 0; j < cols; ++j) gx[j] += g[i] * r[j];
      }
    }
  });
}

Var Graph::affine_rows(Var x, Linear& layer) {
  const Tensor& a = val(x.id);
  require_matrix(a, "affine_rows");
  const Tensor& w = layer.w.value;
  const std::size_t n = a.dim(0), in = w.dim(1), outd = w.dim(0);
  if (a.dim(1) != in) throw ShapeError("affine_rows: input width mismatch");
  Tensor out(Shape{n, outd});
  for (std::size_t r = 0; r < n; ++r) {
    const double* xr = a.row(r);
    double* orow = out.row(r);
    for (std::size_t i = 0; i < outd; ++i) {
      const double* wr = w.row(i);
      double s = layer.b.value[i];
      for (std::size_t j = 0; j < in; ++j) s += wr[j] * xr[j];
      orow[i] = s;
    }
  }
  Linear* lp = &layer;
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), true, [this, x, lp, n, in, outd, id] {
    const Tensor& g = grad(id);
    const Tensor& a = val(x.id);
    const Tensor& w = lp->w.value;
    Tensor& gw = lp->w.grad;
    const bool gx_needed = needs(x);
    for (std::size_t r = 0; r < n; ++r) {
      const double* gr = g.row(r);
      const double* xr = a.row(r);
      for (std::size_t i = 0; i < outd; ++i) {
        double* gwr = gw.row(i);
        for (std::size_t j = 0; j < in; ++j) gwr[j] += gr[i] * xr[j];
        lp->b.grad[i] += gr[i];
      }
      if (gx_needed) {
        double* gxr = grad(x.id).row(r);
        for (std::size_t i = 0; i < outd; ++i) {
          const double* wr = w.row(i);
          for (std::size_t j = 0; j < in; ++j) gxr[j] += gr[i] * wr[j];
        }
      }
    }
  });
}

Var Graph::lstm_cell(Var x, Var h, Var c, LstmParams& p) {
  const std::size_t in = p.input_dim, hid = p.hidden_dim;
  require_len(val(x.id), in, "lstm_cell input");
  require_len(val(h.id), hid, "lstm_cell hidden");
  require_len(val(c.id), hid, "lstm_cell cell");
  const std::size_t zd = in + hid;
  std::vector<double> z(zd);
  std::copy(val(x.id).ptr(), val(x.id).ptr() + in, z.begin());
  std::copy(val(h.id).ptr(), val(h.id).ptr() + hid, z.begin() + in);

  // Gate activations packed as [i | f | o | g].
  std::vector<double> gates(4 * hid);
  const Parameter* ws[4] = {&p.w_input, &p.w_forget, &p.w_output, &p.w_cell};
  const Parameter* bs[4] = {&p.b_input, &p.b_forget, &p.b_output, &p.b_cell};
  for (std::size_t k = 0; k < 4; ++k) {
    const Tensor& w = ws[k]->value;
    for (std::size_t r = 0; r < hid; ++r) {
      const double* wr = w.row(r);
      double s = bs[k]->value[r];
      for (std::size_t j = 0; j < zd; ++j) s += wr[j] * z[j];
      gates[k * hid + r] = (k == 3) ? std::tanh(s) : sigmoid_of(s);
    }
  }
  const Tensor& cv = val(c.id);
  Tensor out(Shape{2 * hid});
  std::vector<double> tc(hid);
  for (std::size_t r = 0; r < hid; ++r) {
    const double ig = gates[r], fg = gates[hid + r], og = gates[2 * hid + r], gg = gates[3 * hid + r];
    const double cn = fg * cv[r] + ig * gg;
    tc[r] = std::tanh(cn);
    out[r] = og * tc[r];
    out[hid + r] = cn;
  }
  LstmParams* pp = &p;
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), true,
              [this, x, h, c, pp, in, hid, zd, id, z = std::move(z), gates = std::move(gates),
               tc = std::move(tc)] {
                const Tensor& g = grad(id);
                const Tensor& cv = val(c.id);
                std::vector<double> da(4 * hid);
                std::vector<double> dc(hid);
                for (std::size_t r = 0; r < hid; ++r) {
                  const double ig = gates[r], fg = gates[hid + r], og = gates[2 * hid + r],
                               gg = gates[3 * hid + r];
                  const double dh = g[r];
                  const double dct = g[hid + r] + dh * og * (1.0 - tc[r] * tc[r]);
                  const double dog = dh * tc[r];
                  da[r] = dct * gg * ig * (1.0 - ig);
                  da[hid + r] = dct * cv[r] * fg * (1.0 - fg);
                  da[2 * hid + r] = dog * og * (1.0 - og);
                  da[3 * hid + r] = dct * ig * (1.0 - gg * gg);
                  dc[r] = dct * fg;
                }
                Parameter* ws[4] = {&pp->w_input, &pp->w_forget, &pp->w_output, &pp->w_cell};
                Parameter* bs[4] = {&pp->b_input, &pp->b_forget, &pp->b_output, &pp->b_cell};
                std::vector<double> dz(zd, 0.0);
                for (std::size_t k = 0; k < 4; ++k) {
                  const Tensor& w = ws[k]->value;
                  Tensor& gw = ws[k]->grad;
                  for (std::size_t r = 0; r < hid; ++r) {
                    const double d = da[k * hid + r];
                    if (d == 0.0) continue;
                    bs[k]->grad[r] += d;
                    double* gwr = gw.row(r);
                    const double* wr = w.row(r);
                    for (std::size_t j = 0; j < zd; ++j) {
                      gwr[j] += d * z[j];
                      dz[j] += d * wr[j];
                    }
                  }
                }
                if (needs(x)) {
                  Tensor& gx = grad(x.id);
                  for (std::size_t j = 0; j < in; ++j) gx[j] += dz[j];
                }
                if (needs(h)) {
                  Tensor& gh = grad(h.id);
                  for (std::size_t j = 0; j < hid; ++j) gh[j] += dz[in + j];
                }
                if (needs(c)) {
                  Tensor& gc = grad(c.id);
                  for (std::size_t j = 0; j < hid; ++j) gc[j] += dc[j];
                }
              });
}

Var Graph::biaffine(Var left, Var right, BiaffineParams& p) {
  const Tensor& l = val(left.id);
  const Tensor& r = val(right.id);
  const std::size_t L = p.left_dim, R = p.right_dim, O = p.out_dim;
  require_len(l, L, "biaffine left");
  require_len(r, R, "biaffine right");
  Tensor out(Shape{O});
  const Tensor& u = p.u.value;
  const Tensor& w = p.w.value;
  for (std::size_t o = 0; o < O; ++o) out[o] = p.b.value[o];
  for (std::size_t i = 0; i < L; ++i) {
    if (l[i] == 0.0) continue;
    for (std::size_t j = 0; j < R; ++j) {
      const double lr = l[i] * r[j];
      const double* uij = u.ptr() + (i * R + j) * O;
      for (std::size_t o = 0; o < O; ++o) out[o] += lr * uij[o];
    }
  }
  for (std::size_t o = 0; o < O; ++o) {
    const double* wr = w.row(o);
    double s = 0;
    for (std::size_t k = 0; k < L; ++k) s += wr[k] * l[k];
    for (std::size_t k = 0; k < R; ++k) s += wr[L + k] * r[k];
    out[o] += s;
  }
  BiaffineParams* pp = &p;
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), true, [this, left, right, pp, L, R, O, id] {
    const Tensor& g = grad(id);
    const Tensor& l = val(left.id);
    const Tensor& r = val(right.id);
    const Tensor& u = pp->u.value;
    const Tensor& w = pp->w.value;
    Tensor& gu = pp->u.grad;
    Tensor& gw = pp->w.grad;
    std::vector<double> dl(L, 0.0), dr(R, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
      for (std::size_t j = 0; j < R; ++j) {
        const double* uij = u.ptr() + (i * R + j) * O;
        double* guij = gu.ptr() + (i * R + j) * O;
        double gu_dot = 0;
        const double lr = l[i] * r[j];
        for (std::size_t o = 0; o < O; ++o) {
          guij[o] += g[o] * lr;
          gu_dot += g[o] * uij[o];
        }
        dl[i] += gu_dot * r[j];
        dr[j] += gu_dot * l[i];
      }
    }
    for (std::size_t o = 0; o < O; ++o) {
      const double* wr = w.row(o);
      double* gwr = gw.row(o);
      for (std::size_t k = 0; k < L; ++k) {
        gwr[k] += g[o] * l[k];
        dl[k] += g[o] * wr[k];
      }
      for (std::size_t k = 0; k < R; ++k) {
        gwr[L + k] += g[o] * r[k];
        dr[k] += g[o] * wr[L + k];
      }
      pp->b.grad[o] += g[o];
    }
    if (needs(left)) {
      Tensor& gl = grad(left.id);
      for (std::size_t i = 0; i < L; ++i) gl[i] += dl[i];
    }
    if (needs(right)) {
      Tensor& gr = grad(right.id);
      for (std::size_t j = 0; j < R; ++j) gr[j] += dr[j];
    }
  });
}

Var Graph::biaffine_pairs(Var heads, Var deps, BiaffineParams& p) {
  const Tensor& hm = val(heads.id);
  const Tensor& dm = val(deps.id);
  require_matrix(hm, "biaffine_pairs heads");
  require_matrix(dm, "biaffine_pairs deps");
  if (p.out_dim != 1) throw ShapeError("biaffine_pairs: scorer must have out_dim 1");
  const std::size_t L = p.left_dim, R = p.right_dim;
  if (hm.dim(1) != L || dm.dim(1) != R || hm.dim(0) != dm.dim(0)) {
    throw ShapeError("biaffine_pairs: " + hm.shape().str() + " and " + dm.shape().str() +
                     " do not fit scorer");
  }
  const std::size_t n = hm.dim(0);
  const Tensor& u = p.u.value;  // L x R x 1, addressable as L x R
  const Tensor& w = p.w.value;
  const double b = p.b.value[0];
  // hu = heads * U  (n x R)
  std::vector<double> hu(n * R, 0.0);
  std::vector<double> hl(n, 0.0), dr(n, 0.0);
  for (std::size_t h = 0; h < n; ++h) {
    const double* hr = hm.row(h);
    for (std::size_t i = 0; i < L; ++i) {
      const double hv = hr[i];
      hl[h] += w[i] * hv;
      for (std::size_t j = 0; j < R; ++j) hu[h * R + j] += hv * u[i * R + j];
    }
  }
  for (std::size_t d = 0; d < n; ++d) {
    const double* drow = dm.row(d);
    for (std::size_t j = 0; j < R; ++j) dr[d] += w[L + j] * drow[j];
  }
  Tensor out(Shape{n, n});
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t d = 0; d < n; ++d) {
      const double* drow = dm.row(d);
      double s = hl[h] + dr[d] + b;
      for (std::size_t j = 0; j < R; ++j) s += hu[h * R + j] * drow[j];
      out.at(h, d) = s;
    }
  }
  BiaffineParams* pp = &p;
  const int id = static_cast<int>(nodes_.size());
  return push(std::move(out), true, [this, heads, deps, pp, L, R, n, id, hu = std::move(hu)] {
    const Tensor& g = grad(id);
    const Tensor& hm = val(heads.id);
    const Tensor& dm = val(deps.id);
    const Tensor& u = pp->u.value;
    const Tensor& w = pp->w.value;
    Tensor& gu = pp->u.grad;
    Tensor& gw = pp->w.grad;
    std::vector<double> row_sum(n, 0.0), col_sum(n, 0.0);
    // gd = G' * heads * U  (n x R): gradient w.r.t. deps through the bilinear term.
    std::vector<double> gdu(n * R, 0.0);
    // gh_r = G * deps (n x R): used for both heads and U gradients.
    std::vector<double> gdep(n * R, 0.0);
    double total = 0;
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t d = 0; d < n; ++d) {
        const double gv = g.at(h, d);
        if (gv == 0.0) continue;
        row_sum[h] += gv;
        col_sum[d] += gv;
        total += gv;
        const double* drow = dm.row(d);
        for (std::size_t j = 0; j < R; ++j) {
          gdu[d * R + j] += gv * hu[h * R + j];
          gdep[h * R + j] += gv * drow[j];
        }
      }
    }
    pp->b.grad[0] += total;
    for (std::size_t h = 0; h < n; ++h) {
      const double* hr = hm.row(h);
      for (std::size_t i = 0; i < L; ++i) {
        gw[i] += row_sum[h] * hr[i];
        for (std::size_t j = 0; j < R; ++j) gu[i * R + j] += hr[i] * gdep[h * R + j];
      }
    }
    for (std::size_t d = 0; d < n; ++d) {
      const double* drow = dm.row(d);
      for (std::size_t j = 0; j < R; ++j) gw[L + j] += col_sum[d] * drow[j];
    }
    if (needs(heads)) {
      Tensor& gh = grad(heads.id);
      for (std::size_t h = 0; h < n; ++h) {
        double* ghr = gh.row(h);
        for (std::size_t i = 0; i < L; ++i) {
          double s = row_sum[h] * w[i];
          for (std::size_t j = 0; j < R; ++j) s += u[i * R + j] * gdep[h * R + j];
          ghr[i] += s;
        }
      }
    }
    if (needs(deps)) {
      Tensor& gd = grad(deps.id);
      for (std::size_t d = 0; d < n; ++d) {
        double* gdr = gd.row(d);
        for (std::size_t j = 0; j < R; ++j) gdr[j] += gdu[d * R + j] + col_sum[d] * w[L + j];
      }
    }
  });
}

Var Graph::cross_entropy(Var logits, std::size_t target) {
  const Tensor& x = val(logits.id);
  require_vector(x, "cross_entropy");
  if (target >= x.size()) throw ShapeError("cross_entropy: target out of range");
  const double m = *std::max_element(x.ptr(), x.ptr() + x.size());
  double z = 0;
  for (std::size_t i = 0; i < x.size(); ++i) z += std::exp(x[i] - m);
  const double lse = m + std::log(z);
  const int id = static_cast<int>(nodes_.size());
  return push(Tensor::scalar(lse - x[target]), needs(logits), [this, logits, target, lse, id] {
    const double g = grad(id)[0];
    const Tensor& x = val(logits.id);
    Tensor& gx = grad(logits.id);
    for (std::size_t i = 0; i < x.size(); ++i) {
      gx[i] += g * (std::exp(x[i] - lse) - (i == target ? 1.0 : 0.0));
    }
  });
}

Var Graph::head_cross_entropy(Var scores, std::span<const std::size_t> gold_heads) {
  const Tensor& s = val(scores.id);
  require_matrix(s, "head_cross_entropy");
  const std::size_t n = s.dim(0);
  if (s.dim(1) != n || gold_heads.size() != n) throw ShapeError("head_cross_entropy: size mismatch");
  std::vector<double> lse(n, 0.0);
  double loss = 0;
  for (std::size_t d = 1; d < n; ++d) {
    const std::size_t gh = gold_heads[d];
    if (gh >= n || gh == d) throw DataError("head_cross_entropy: invalid gold head");
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < n; ++h) {
      if (h != d) m = std::max(m, s.at(h, d));
    }
    double z = 0;
    for (std::size_t h = 0; h < n; ++h) {
      if (h != d) z += std::exp(s.at(h, d) - m);
    }
    lse[d] = m + std::log(z);
    loss += lse[d] - s.at(gh, d);
  }
  std::vector<std::size_t> gold(gold_heads.begin(), gold_heads.end());
  const int id = static_cast<int>(nodes_.size());
  return push(Tensor::scalar(loss), needs(scores),
              [this, scores, n, id, lse = std::move(lse), gold = std::move(gold)] {
                const double g = grad(id)[0];
                const Tensor& s = val(scores.id);
                Tensor& gs = grad(scores.id);
                for (std::size_t d = 1; d < n; ++d) {
                  for (std::size_t h = 0; h < n; ++h) {
                    if (h == d) continue;
                    gs.at(h, d) += g * (std::exp(s.at(h, d) - lse[d]) - (h == gold[d] ? 1.0 : 0.0));
                  }
                }
              });
}

Var Graph::crf_nll(Var emissions, CrfParams& p, std::span<const std::size_t> gold) {
  const Tensor& e = val(emissions.id);
  require_matrix(e, "crf_nll");
  const std::size_t len = e.dim(0), k = p.num_labels;
  if (e.dim(1) != k) throw ShapeError("crf_nll: emission width does not match label count");
  if (gold.size() != len) throw ShapeError("crf_nll: gold path length mismatch");
  if (len == 0) throw DomainError("crf_nll: empty sequence");
  for (const std::size_t y : gold) {
    if (y >= k) throw DataError("crf_nll: gold label out of range");
  }
  CrfMarginals marg = crf_marginals(e, p);
  const double nll = marg.log_partition - crf_path_score(e, p, gold);
  std::vector<std::size_t> path(gold.begin(), gold.end());
  CrfParams* pp = &p;
  const int id = static_cast<int>(nodes_.size());
  return push(Tensor::scalar(nll), true,
              [this, emissions, pp, len, k, id, marg = std::move(marg), path = std::move(path)] {
                const double g = grad(id)[0];
                Tensor& gt = pp->transitions.grad;
                for (std::size_t a = 0; a < k; ++a) {
                  for (std::size_t b = 0; b < k; ++b) gt.at(a, b) += g * marg.pair.at(a, b);
                }
                for (std::size_t y = 0; y < k; ++y) {
                  pp->start.grad[y] += g * marg.unary.at(0, y);
                  pp->stop.grad[y] += g * marg.unary.at(len - 1, y);
                }
                pp->start.grad[path[0]] -= g;
                pp->stop.grad[path[len - 1]] -= g;
                for (std::size_t t = 1; t < len; ++t) gt.at(path[t - 1], path[t]) -= g;
                if (needs(emissions)) {
                  Tensor& ge = grad(emissions.id);
                  for (std::size_t t = 0; t < len; ++t) {
                    for (std::size_t y = 0; y < k; ++y) ge.at(t, y) += g * marg.unary.at(t, y);
                    ge.at(t, path[t]) -= g;
                  }
                }
              });
}

void Graph::backward(Var loss) {
  if (!loss.valid() || loss.id >= static_cast<int>(nodes_.size())) {
    throw ContractError("backward: loss does not belong to this graph");
  }
  if (val(loss.id).size() != 1) {
    throw ContractError("backward: loss must be a scalar, got shape " + val(loss.id).shape().str());
  }
  if (!needs(loss)) return;
  grad(loss.id)[0] += 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.back) continue;
    if (n.grad.empty()) continue;
    n.back();
  }
}

std::pair<Var, Var> split_state(Graph& g, Var state, std::size_t hidden) {
  return {g.slice(state, 0, hidden), g.slice(state, hidden, hidden)};
}

}  // namespace biopipe
