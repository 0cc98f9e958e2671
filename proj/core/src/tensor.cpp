/*
 * Copyright 2026 The BloomNet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bloomnet/tensor.hpp"

#include <cmath>

namespace bloomnet::nn {

uint64_t checksum(const Parameter& p) {
  uint64_t h = fnv1a64(p.name);
  long r = p.value.rows();
  long c = p.value.cols();
  h = fnv1a64(&r, sizeof(r), h);
  h = fnv1a64(&c, sizeof(c), h);
  return fnv1a64(p.value.data(), sizeof(double) * static_cast<size_t>(p.value.size()), h);
}

uint64_t checksum(const std::vector<Parameter*>& params) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const Parameter* p : params) {
    uint64_t ph = checksum(*p);
    h = fnv1a64(&ph, sizeof(ph), h);
  }
  return h;
}

Node* Tape::alloc(Matrix v, bool requires_grad) {
  nodes_.emplace_back();
  Node* n = &nodes_.back();
  n->value = std::move(v);
  n->requires_grad = requires_grad;
  return n;
}

void Tape::ensure_grad(Node* n) {
  if (n->grad.size() == 0) n->grad = Matrix::Zero(n->value.rows(), n->value.cols());
}

Var Tape::constant(Matrix v) { return Var(alloc(std::move(v), false)); }

Var Tape::leaf(Matrix v) { return Var(alloc(std::move(v), true)); }

Var Tape::param(Parameter& p) {
  if (!p.trainable) return constant(p.value);
  Node* n = alloc(p.value, true);
  Parameter* pp = &p;
  n->backward = [pp](Node& self) { pp->grad += self.grad; };
  return Var(n);
}

namespace {

void check_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

}  // namespace

Var Tape::add(Var a, Var b) {
  check_same_shape(a, b, "add");
  bool rg = a.requires_grad() || b.requires_grad();
  Node* n = alloc(a.value() + b.value(), rg);
  if (rg) {
    Node* pa = a.node_;
    Node* pb = b.node_;
    n->backward = [pa, pb](Node& self) {
      if (pa->requires_grad) {
        ensure_grad(pa);
        pa->grad += self.grad;
      }
      if (pb->requires_grad) {
        ensure_grad(pb);
        pb->grad += self.grad;
      }
    };
  }
  return Var(n);
}

Var Tape::sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  bool rg = a.requires_grad() || b.requires_grad();
  Node* n = alloc(a.value() - b.value(), rg);
  if (rg) {
    Node* pa = a.node_;
    Node* pb = b.node_;
    n->backward = [pa, pb](Node& self) {
      if (pa->requires_grad) {
        ensure_grad(pa);
        pa->grad += self.grad;
      }
      if (pb->requires_grad) {
        ensure_grad(pb);
        pb->grad -= self.grad;
      }
    };
  }
  return Var(n);
}

Var Tape::cmul(Var a, Var b) {
  check_same_shape(a, b, "cmul");
  bool rg = a.requires_grad() || b.requires_grad();
  Node* n = alloc((a.value().array() * b.value().array()).matrix(), rg);
  if (rg) {
    Node* pa = a.node_;
    Node* pb = b.node_;
    n->backward = [pa, pb](Node& self) {
      if (pa->requires_grad) {
        ensure_grad(pa);
        pa->grad.array() += self.grad.array() * pb->value.array();
      }
      if (pb->requires_grad) {
        ensure_grad(pb);
        pb->grad.array() += self.grad.array() * pa->value.array();
      }
    };
  }
  return Var(n);
}

Var Tape::scale(Var a, double s) {
  bool rg = a.requires_grad();
  Node* n = alloc(a.value() * s, rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa, s](Node& self) {
      ensure_grad(pa);
      pa->grad += self.grad * s;
    };
  }
  return Var(n);
}

Var Tape::matmul(Var a, Var b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  bool rg = a.requires_grad() || b.requires_grad();
  Node* n = alloc(a.value() * b.value(), rg);
  if (rg) {
    Node* pa = a.node_;
    Node* pb = b.node_;
    n->backward = [pa, pb](Node& self) {
      if (pa->requires_grad) {
        ensure_grad(pa);
        pa->grad.noalias() += self.grad * pb->value.transpose();
      }
      if (pb->requires_grad) {
        ensure_grad(pb);
        pb->grad.noalias() += pa->value.transpose() * self.grad;
      }
    };
  }
  return Var(n);
}

Var Tape::transpose(Var a) {
  bool rg = a.requires_grad();
  Node* n = alloc(a.value().transpose(), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa](Node& self) {
      ensure_grad(pa);
      pa->grad += self.grad.transpose();
    };
  }
  return Var(n);
}

Var Tape::add_row_broadcast(Var a, Var row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw ShapeError("add_row_broadcast: row must be 1x" + std::to_string(a.cols()));
  }
  bool rg = a.requires_grad() || row.requires_grad();
  Matrix v = a.value();
  v.rowwise() += Eigen::RowVectorXd(row.value().row(0));
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pa = a.node_;
    Node* pr = row.node_;
    n->backward = [pa, pr](Node& self) {
      if (pa->requires_grad) {
        ensure_grad(pa);
        pa->grad += self.grad;
      }
      if (pr->requires_grad) {
        ensure_grad(pr);
        pr->grad += self.grad.colwise().sum();
      }
    };
  }
  return Var(n);
}

Var Tape::tanh(Var a) {
  bool rg = a.requires_grad();
  Node* n = alloc(a.value().array().tanh().matrix(), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa](Node& self) {
      ensure_grad(pa);
      pa->grad.array() += self.grad.array() * (1.0 - self.value.array().square());
    };
  }
  return Var(n);
}

Var Tape::sigmoid(Var a) {
  bool rg = a.requires_grad();
  Matrix v = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa](Node& self) {
      ensure_grad(pa);
      pa->grad.array() += self.grad.array() * self.value.array() * (1.0 - self.value.array());
    };
  }
  return Var(n);
}

Var Tape::relu(Var a) {
  bool rg = a.requires_grad();
  Node* n = alloc(a.value().cwiseMax(0.0), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa](Node& self) {
      ensure_grad(pa);
      pa->grad.array() +=
          self.grad.array() * (pa->value.array() > 0.0).cast<double>();
    };
  }
  return Var(n);
}

Var Tape::gelu(Var a) {
  bool rg = a.requires_grad();
  Matrix v = a.value().unaryExpr(
      [](double x) { return 0.5 * x * (1.0 + std::erf(x / M_SQRT2)); });
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa](Node& self) {
      ensure_grad(pa);
      const double inv_sqrt_2pi = 0.3989422804014327;
      Matrix d = pa->value.unaryExpr([inv_sqrt_2pi](double x) {
        return 0.5 * (1.0 + std::erf(x / M_SQRT2)) + x * inv_sqrt_2pi * std::exp(-0.5 * x * x);
      });
      pa->grad.array() += self.grad.array() * d.array();
    };
  }
  return Var(n);
}

Var Tape::softmax_rows(Var a) {
  Matrix v(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); ++i) {
    Eigen::ArrayXd r = a.value().row(i).array();
    double m = r.maxCoeff();
    Eigen::ArrayXd e = (r - m).exp();
    v.row(i) = (e / e.sum()).matrix();
  }
  bool rg = a.requires_grad();
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa](Node& self) {
      ensure_grad(pa);
      for (long i = 0; i < self.value.rows(); ++i) {
        Eigen::ArrayXd s = self.value.row(i).array();
        Eigen::ArrayXd g = self.grad.row(i).array();
        double dot = (g * s).sum();
        pa->grad.row(i).array() += s * (g - dot);
      }
    };
  }
  return Var(n);
}

Var Tape::row(Var a, long i) { return rows(a, i, 1); }

Var Tape::rows(Var a, long start, long n_rows) {
  if (start < 0 || start + n_rows > a.rows()) throw ShapeError("rows: block out of range");
  bool rg = a.requires_grad();
  Node* n = alloc(a.value().middleRows(start, n_rows), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa, start, n_rows](Node& self) {
      ensure_grad(pa);
      pa->grad.middleRows(start, n_rows) += self.grad;
    };
  }
  return Var(n);
}

Var Tape::slice_cols(Var a, long start, long n_cols) {
  if (start < 0 || start + n_cols > a.cols()) throw ShapeError("slice_cols: block out of range");
  bool rg = a.requires_grad();
  Node* n = alloc(a.value().middleCols(start, n_cols), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa, start, n_cols](Node& self) {
      ensure_grad(pa);
      pa->grad.middleCols(start, n_cols) += self.grad;
    };
  }
  return Var(n);
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no parts");
  long r = parts[0].rows();
  long total = 0;
  bool rg = false;
  for (const Var& p : parts) {
    if (p.rows() != r) throw ShapeError("concat_cols: row count mismatch");
    total += p.cols();
    rg = rg || p.requires_grad();
  }
  Matrix v(r, total);
  long off = 0;
  for (const Var& p : parts) {
    v.middleCols(off, p.cols()) = p.value();
    off += p.cols();
  }
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    std::vector<Node*> srcs;
    srcs.reserve(parts.size());
    for (const Var& p : parts) srcs.push_back(p.node_);
    n->backward = [srcs](Node& self) {
      long off = 0;
      for (Node* s : srcs) {
        long c = s->value.cols();
        if (s->requires_grad) {
          ensure_grad(s);
          s->grad += self.grad.middleCols(off, c);
        }
        off += c;
      }
    };
  }
  return Var(n);
}

Var Tape::stack_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("stack_rows: no parts");
  long c = parts[0].cols();
  long total = 0;
  bool rg = false;
  for (const Var& p : parts) {
    if (p.cols() != c) throw ShapeError("stack_rows: column count mismatch");
    total += p.rows();
    rg = rg || p.requires_grad();
  }
  Matrix v(total, c);
  long off = 0;
  for (const Var& p : parts) {
    v.middleRows(off, p.rows()) = p.value();
    off += p.rows();
  }
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    std::vector<Node*> srcs;
    srcs.reserve(parts.size());
    for (const Var& p : parts) srcs.push_back(p.node_);
    n->backward = [srcs](Node& self) {
      long off = 0;
      for (Node* s : srcs) {
        long r = s->value.rows();
        if (s->requires_grad) {
          ensure_grad(s);
          s->grad += self.grad.middleRows(off, r);
        }
        off += r;
      }
    };
  }
  return Var(n);
}

Var Tape::max_rows(Var a) {
  if (a.rows() < 1) throw ShapeError("max_rows: empty input");
  Matrix v(1, a.cols());
  std::vector<long> argmax(static_cast<size_t>(a.cols()));
  for (long j = 0; j < a.cols(); ++j) {
    long best = 0;
    for (long i = 1; i < a.rows(); ++i) {
      if (a.value()(i, j) > a.value()(best, j)) best = i;
    }
    argmax[static_cast<size_t>(j)] = best;
    v(0, j) = a.value()(best, j);
  }
  bool rg = a.requires_grad();
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa, argmax](Node& self) {
      ensure_grad(pa);
      for (long j = 0; j < self.value.cols(); ++j) {
        pa->grad(argmax[static_cast<size_t>(j)], j) += self.grad(0, j);
      }
    };
  }
  return Var(n);
}

Var Tape::masked_mean_rows(Var a, const std::vector<int>& mask) {
  if (static_cast<long>(mask.size()) != a.rows()) {
    throw ShapeError("masked_mean_rows: mask length != rows");
  }
  double total = 0.0;
  for (int m : mask) total += (m != 0) ? 1.0 : 0.0;
  if (total == 0.0) throw ShapeError("masked_mean_rows: all positions masked");
  Matrix v = Matrix::Zero(1, a.cols());
  for (long i = 0; i < a.rows(); ++i) {
    if (mask[static_cast<size_t>(i)]) v += a.value().row(i);
  }
  v /= total;
  bool rg = a.requires_grad();
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pa = a.node_;
    n->backward = [pa, mask, total](Node& self) {
      ensure_grad(pa);
      for (long i = 0; i < pa->value.rows(); ++i) {
        if (mask[static_cast<size_t>(i)]) pa->grad.row(i) += self.grad.row(0) / total;
      }
    };
  }
  return Var(n);
}

Var Tape::layer_norm(Var x, Var gamma, Var beta, double eps) {
  if (gamma.rows() != 1 || gamma.cols() != x.cols() || beta.rows() != 1 ||
      beta.cols() != x.cols()) {
    throw ShapeError("layer_norm: gamma/beta must be 1x" + std::to_string(x.cols()));
  }
  long r = x.rows();
  long d = x.cols();
  Matrix xhat(r, d);
  std::vector<double> inv_std(static_cast<size_t>(r));
  for (long i = 0; i < r; ++i) {
    Eigen::ArrayXd xi = x.value().row(i).array();
    double mu = xi.mean();
    double var = (xi - mu).square().mean();
    double istd = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(i)] = istd;
    xhat.row(i) = ((xi - mu) * istd).matrix();
  }
  Matrix v(r, d);
  for (long i = 0; i < r; ++i) {
    v.row(i) = (xhat.row(i).array() * gamma.value().row(0).array() +
                beta.value().row(0).array())
                   .matrix();
  }
  bool rg = x.requires_grad() || gamma.requires_grad() || beta.requires_grad();
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* px = x.node_;
    Node* pg = gamma.node_;
    Node* pb = beta.node_;
    n->backward = [px, pg, pb, xhat, inv_std, d](Node& self) {
      for (long i = 0; i < self.value.rows(); ++i) {
        Eigen::ArrayXd g = self.grad.row(i).array();
        Eigen::ArrayXd xh = xhat.row(i).array();
        if (pg->requires_grad) {
          ensure_grad(pg);
          pg->grad.row(0).array() += g * xh;
        }
        if (pb->requires_grad) {
          ensure_grad(pb);
          pb->grad.row(0).array() += g;
        }
        if (px->requires_grad) {
          ensure_grad(px);
          Eigen::ArrayXd dxhat = g * pg->value.row(0).array();
          double mean_dxhat = dxhat.mean();
          double mean_dxhat_xhat = (dxhat * xh).mean();
          Eigen::ArrayXd dx =
              inv_std[static_cast<size_t>(i)] * (dxhat - mean_dxhat - xh * mean_dxhat_xhat);
          (void)d;
          px->grad.row(i).array() += dx;
        }
      }
    };
  }
  return Var(n);
}

Var Tape::embedding_rows(Parameter& table, const std::vector<int>& ids) {
  long d = table.value.cols();
  Matrix v(static_cast<long>(ids.size()), d);
  for (size_t i = 0; i < ids.size(); ++i) {
    int id = ids[i];
    if (id < 0 || id >= table.value.rows()) {
      throw ShapeError("embedding_rows: id " + std::to_string(id) + " outside table of " +
                       std::to_string(table.value.rows()) + " rows");
    }
    v.row(static_cast<long>(i)) = table.value.row(id);
  }
  bool rg = table.trainable;
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Parameter* pt = &table;
    n->backward = [pt, ids](Node& self) {
      for (size_t i = 0; i < ids.size(); ++i) {
        pt->grad.row(ids[i]) += self.grad.row(static_cast<long>(i));
      }
    };
  }
  return Var(n);
}

Var Tape::dropout(Var a, double p, Rng& rng, bool training) {
  if (!training || p <= 0.0) return a;
  if (p >= 1.0) throw ConfigError("dropout: rate must be < 1");
  Matrix mask(a.rows(), a.cols());
  double keep = 1.0 - p;
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      mask(i, j) = (rng.uniform() < p) ? 0.0 : 1.0 / keep;
    }
  }
  return cmul(a, constant(std::move(mask)));
}

Var Tape::cross_entropy_logits(Var logits, const std::vector<int>& labels) {
  long b = logits.rows();
  long c = logits.cols();
  if (static_cast<long>(labels.size()) != b) {
    throw ShapeError("cross_entropy_logits: labels length != logit rows");
  }
  if (!logits.value().allFinite()) throw NumericError("cross_entropy_logits: non-finite logits");
  Matrix probs(b, c);
  double total = 0.0;
  for (long i = 0; i < b; ++i) {
    int y = labels[static_cast<size_t>(i)];
    if (y < 0 || y >= c) throw ShapeError("cross_entropy_logits: label out of range");
    Eigen::ArrayXd z = logits.value().row(i).array();
    double m = z.maxCoeff();
    Eigen::ArrayXd e = (z - m).exp();
    double sum = e.sum();
    probs.row(i) = (e / sum).matrix();
    double lse = m + std::log(sum);
    total += lse - z(y);
  }
  Matrix v(1, 1);
  v(0, 0) = total / static_cast<double>(b);
  bool rg = logits.requires_grad();
  Node* n = alloc(std::move(v), rg);
  if (rg) {
    Node* pl = logits.node_;
    n->backward = [pl, probs, labels, b](Node& self) {
      ensure_grad(pl);
      double g = self.grad(0, 0) / static_cast<double>(b);
      pl->grad += g * probs;
      for (long i = 0; i < b; ++i) {
        pl->grad(i, labels[static_cast<size_t>(i)]) -= g;
      }
    };
  }
  return Var(n);
}

void Tape::backward(Var root) {
  if (!root.valid() || root.rows() != 1 || root.cols() != 1) {
    throw ShapeError("backward: root must be a 1x1 scalar");
  }
  if (!root.requires_grad()) return;
  ensure_grad(root.node_);
  root.node_->grad(0, 0) = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node& n = *it;
    if (n.requires_grad && n.backward && n.grad.size() != 0) n.backward(n);
  }
}

RowVector softmax_stable(const RowVector& logits) {
  Eigen::ArrayXd z = logits.array();
  double m = z.maxCoeff();
  Eigen::ArrayXd e = (z - m).exp();
  return (e / e.sum()).matrix();
}

}  // namespace bloomnet::nn
