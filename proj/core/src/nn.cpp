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

#include "bloomnet/nn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

namespace bloomnet::nn {

Matrix xavier_uniform(long rows, long cols, Rng& rng) {
  double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  }
  return m;
}

Matrix normal_init(long rows, long cols, double stddev, Rng& rng) {
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, stddev);
  }
  return m;
}

Linear::Linear(const std::string& name, long in, long out, Rng& rng)
    : w_(name + ".weight", xavier_uniform(out, in, rng)),
      b_(name + ".bias", Matrix::Zero(1, out)) {}

Var Linear::forward(Tape& t, Var x) {
  if (x.cols() != w_.value.cols()) {
    throw ShapeError(w_.name + ": input width " + std::to_string(x.cols()) + " != " +
                     std::to_string(w_.value.cols()));
  }
  Var wt = t.transpose(t.param(w_));
  return t.add_row_broadcast(t.matmul(x, wt), t.param(b_));
}

void Linear::collect(std::vector<Parameter*>& out) {
  out.push_back(&w_);
  out.push_back(&b_);
}

LayerNorm::LayerNorm(const std::string& name, long dim)
    : gamma_(name + ".gamma", Matrix::Ones(1, dim)), beta_(name + ".beta", Matrix::Zero(1, dim)) {}

Var LayerNorm::forward(Tape& t, Var x) {
  return t.layer_norm(x, t.param(gamma_), t.param(beta_));
}

void LayerNorm::collect(std::vector<Parameter*>& out) {
  out.push_back(&gamma_);
  out.push_back(&beta_);
}

MultiHeadSelfAttention::MultiHeadSelfAttention(const std::string& name, long dim, long heads,
                                               Rng& rng)
    : dim_(dim),
      heads_(heads),
      head_dim_(dim / heads),
      q_(name + ".q", dim, dim, rng),
      k_(name + ".k", dim, dim, rng),
      v_(name + ".v", dim, dim, rng),
      o_(name + ".o", dim, dim, rng) {
  if (dim % heads != 0) {
    throw ConfigError(name + ": hidden dim " + std::to_string(dim) +
                      " not divisible by heads " + std::to_string(heads));
  }
}

Var MultiHeadSelfAttention::forward(Tape& t, Var x, const Matrix& key_mask_bias) {
  long len = x.rows();
  if (key_mask_bias.rows() != len || key_mask_bias.cols() != len) {
    throw ShapeError("attention mask must be len x len");
  }
  Var q = q_.forward(t, x);
  Var k = k_.forward(t, x);
  Var v = v_.forward(t, x);
  Var bias = t.constant(key_mask_bias);
  double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim_));
  std::vector<Var> head_outs;
  head_outs.reserve(static_cast<size_t>(heads_));
  for (long h = 0; h < heads_; ++h) {
    Var qh = t.slice_cols(q, h * head_dim_, head_dim_);
    Var kh = t.slice_cols(k, h * head_dim_, head_dim_);
    Var vh = t.slice_cols(v, h * head_dim_, head_dim_);
    Var scores = t.scale(t.matmul(qh, t.transpose(kh)), inv_sqrt);
    Var alphas = t.softmax_rows(t.add(scores, bias));
    head_outs.push_back(t.matmul(alphas, vh));
  }
  return o_.forward(t, t.concat_cols(head_outs));
}

void MultiHeadSelfAttention::collect(std::vector<Parameter*>& out) {
  q_.collect(out);
  k_.collect(out);
  v_.collect(out);
  o_.collect(out);
}

FeedForward::FeedForward(const std::string& name, long dim, long inner, Rng& rng)
    : in_(name + ".in", dim, inner, rng), out_(name + ".out", inner, dim, rng) {}

Var FeedForward::forward(Tape& t, Var x) { return out_.forward(t, t.gelu(in_.forward(t, x))); }

void FeedForward::collect(std::vector<Parameter*>& out) {
  in_.collect(out);
  out_.collect(out);
}

TransformerLayer::TransformerLayer(const std::string& name, long dim, long heads, long inner,
                                   Rng& rng)
    : attn_(name + ".attn", dim, heads, rng),
      ln1_(name + ".ln1", dim),
      ffn_(name + ".ffn", dim, inner, rng),
      ln2_(name + ".ln2", dim) {}

Var TransformerLayer::forward(Tape& t, Var x, const Matrix& key_mask_bias, double dropout_p,
                              Rng* dropout_rng, bool training) {
  Var a = attn_.forward(t, x, key_mask_bias);
  if (training && dropout_rng) a = t.dropout(a, dropout_p, *dropout_rng, training);
  Var h = ln1_.forward(t, t.add(x, a));
  Var f = ffn_.forward(t, h);
  if (training && dropout_rng) f = t.dropout(f, dropout_p, *dropout_rng, training);
  return ln2_.forward(t, t.add(h, f));
}

void TransformerLayer::collect(std::vector<Parameter*>& out) {
  attn_.collect(out);
  ln1_.collect(out);
  ffn_.collect(out);
  ln2_.collect(out);
}

GruCell::GruCell(const std::string& name, long in, long hidden, Rng& rng)
    : hidden_(hidden),
      wr_(name + ".wr", xavier_uniform(hidden, in, rng)),
      wz_(name + ".wz", xavier_uniform(hidden, in, rng)),
      wn_(name + ".wn", xavier_uniform(hidden, in, rng)),
      ur_(name + ".ur", xavier_uniform(hidden, hidden, rng)),
      uz_(name + ".uz", xavier_uniform(hidden, hidden, rng)),
      un_(name + ".un", xavier_uniform(hidden, hidden, rng)),
      br_(name + ".br", Matrix::Zero(1, hidden)),
      bz_(name + ".bz", Matrix::Zero(1, hidden)),
      bn_(name + ".bn", Matrix::Zero(1, hidden)),
      bhn_(name + ".bhn", Matrix::Zero(1, hidden)) {}

Var GruCell::step(Tape& t, Var x, Var h) {
  auto lin = [&](Parameter& w, Var in) { return t.matmul(in, t.transpose(t.param(w))); };
  Var r = t.sigmoid(t.add_row_broadcast(t.add(lin(wr_, x), lin(ur_, h)), t.param(br_)));
  Var z = t.sigmoid(t.add_row_broadcast(t.add(lin(wz_, x), lin(uz_, h)), t.param(bz_)));
  Var cand_h = t.add_row_broadcast(lin(un_, h), t.param(bhn_));
  Var n = t.tanh(t.add_row_broadcast(t.add(lin(wn_, x), t.cmul(r, cand_h)), t.param(bn_)));
  Var one_minus_z = t.sub(t.constant(Matrix::Ones(1, hidden_)), z);
  return t.add(t.cmul(one_minus_z, n), t.cmul(z, h));
}

void GruCell::collect(std::vector<Parameter*>& out) {
  for (Parameter* p : {&wr_, &wz_, &wn_, &ur_, &uz_, &un_, &br_, &bz_, &bn_, &bhn_}) {
    out.push_back(p);
  }
}

BiGru::BiGru(const std::string& name, long in, long hidden, long layers, Rng& rng)
    : hidden_(hidden), layers_(layers) {
  if (layers < 1) throw ConfigError(name + ": needs at least one layer");
  for (long l = 0; l < layers; ++l) {
    long layer_in = (l == 0) ? in : 2 * hidden;
    fwd_.push_back(
        std::make_unique<GruCell>(name + ".l" + std::to_string(l) + ".fwd", layer_in, hidden, rng));
    bwd_.push_back(
        std::make_unique<GruCell>(name + ".l" + std::to_string(l) + ".bwd", layer_in, hidden, rng));
  }
}

std::vector<Var> BiGru::forward(Tape& t, const std::vector<Var>& inputs) {
  if (inputs.empty()) throw ShapeError("BiGru: empty input sequence");
  std::vector<Var> layer_in = inputs;
  size_t n = inputs.size();
  for (long l = 0; l < layers_; ++l) {
    std::vector<Var> hf(n), hb(n);
    Var h = t.constant(Matrix::Zero(1, hidden_));
    for (size_t i = 0; i < n; ++i) {
      h = fwd_[static_cast<size_t>(l)]->step(t, layer_in[i], h);
      hf[i] = h;
    }
    h = t.constant(Matrix::Zero(1, hidden_));
    for (size_t i = n; i-- > 0;) {
      h = bwd_[static_cast<size_t>(l)]->step(t, layer_in[i], h);
      hb[i] = h;
    }
    std::vector<Var> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = t.concat_cols({hf[i], hb[i]});
    layer_in = std::move(out);
  }
  return layer_in;
}

void BiGru::collect(std::vector<Parameter*>& out) {
  for (auto& c : fwd_) c->collect(out);
  for (auto& c : bwd_) c->collect(out);
}

LstmCell::LstmCell(const std::string& name, long in, long hidden, Rng& rng)
    : hidden_(hidden),
      wi_(name + ".wi", xavier_uniform(hidden, in, rng)),
      wf_(name + ".wf", xavier_uniform(hidden, in, rng)),
      wg_(name + ".wg", xavier_uniform(hidden, in, rng)),
      wo_(name + ".wo", xavier_uniform(hidden, in, rng)),
      ui_(name + ".ui", xavier_uniform(hidden, hidden, rng)),
      uf_(name + ".uf", xavier_uniform(hidden, hidden, rng)),
      ug_(name + ".ug", xavier_uniform(hidden, hidden, rng)),
      uo_(name + ".uo", xavier_uniform(hidden, hidden, rng)),
      bi_(name + ".bi", Matrix::Zero(1, hidden)),
      bf_(name + ".bf", Matrix::Ones(1, hidden)),  // forget bias 1
      bg_(name + ".bg", Matrix::Zero(1, hidden)),
      bo_(name + ".bo", Matrix::Zero(1, hidden)) {}

LstmCell::State LstmCell::step(Tape& t, Var x, State s) {
  auto lin = [&](Parameter& w, Var in) { return t.matmul(in, t.transpose(t.param(w))); };
  Var i = t.sigmoid(t.add_row_broadcast(t.add(lin(wi_, x), lin(ui_, s.h)), t.param(bi_)));
  Var f = t.sigmoid(t.add_row_broadcast(t.add(lin(wf_, x), lin(uf_, s.h)), t.param(bf_)));
  Var g = t.tanh(t.add_row_broadcast(t.add(lin(wg_, x), lin(ug_, s.h)), t.param(bg_)));
  Var o = t.sigmoid(t.add_row_broadcast(t.add(lin(wo_, x), lin(uo_, s.h)), t.param(bo_)));
  Var c = t.add(t.cmul(f, s.c), t.cmul(i, g));
  Var h = t.cmul(o, t.tanh(c));
  return {h, c};
}

void LstmCell::collect(std::vector<Parameter*>& out) {
  for (Parameter* p :
       {&wi_, &wf_, &wg_, &wo_, &ui_, &uf_, &ug_, &uo_, &bi_, &bf_, &bg_, &bo_}) {
    out.push_back(p);
  }
}

Adam::Adam(std::vector<Parameter*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  for (Parameter* p : params_) {
    if (!p->trainable) {
      throw ConfigError("Adam: frozen parameter " + p->name + " in optimizer set");
    }
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step() {
  ++t_;
  double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * p.grad;
    v_[i] = (config_.beta2 * v_[i].array() + (1.0 - config_.beta2) * p.grad.array().square())
                .matrix();
    Eigen::ArrayXXd mhat = m_[i].array() / bc1;
    Eigen::ArrayXXd vhat = v_[i].array() / bc2;
    p.value.array() -= config_.lr * mhat / (vhat.sqrt() + config_.eps);
  }
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

ParameterSnapshot::ParameterSnapshot(const std::vector<Parameter*>& params) {
  values_.reserve(params.size());
  for (const Parameter* p : params) values_.push_back(p->value);
}

void ParameterSnapshot::restore(const std::vector<Parameter*>& params) const {
  if (params.size() != values_.size()) throw ShapeError("snapshot: parameter set changed");
  for (size_t i = 0; i < params.size(); ++i) params[i]->value = values_[i];
}

namespace {

constexpr char kArchiveMagic[4] = {'B', 'N', 'P', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError("truncated tensor archive: " + path);
  return v;
}

}  // namespace

void save_parameters(const std::string& path, const std::vector<Parameter*>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write tensor archive: " + path);
  out.write(kArchiveMagic, sizeof(kArchiveMagic));
  write_pod<uint64_t>(out, params.size());
  for (const Parameter* p : params) {
    write_pod<uint32_t>(out, static_cast<uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    write_pod<uint64_t>(out, static_cast<uint64_t>(p->value.rows()));
    write_pod<uint64_t>(out, static_cast<uint64_t>(p->value.cols()));
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(p->value.size())));
  }
  if (!out) throw DataError("failed writing tensor archive: " + path);
}

void load_parameters(const std::string& path, const std::vector<Parameter*>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tensor archive: " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kArchiveMagic, sizeof(magic)) != 0) {
    throw DataError("not a tensor archive: " + path);
  }
  uint64_t count = read_pod<uint64_t>(in, path);
  std::map<std::string, Matrix> loaded;
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t name_len = read_pod<uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    uint64_t rows = read_pod<uint64_t>(in, path);
    uint64_t cols = read_pod<uint64_t>(in, path);
    Matrix m(static_cast<long>(rows), static_cast<long>(cols));
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * rows * cols));
    if (!in) throw DataError("truncated tensor archive: " + path);
    loaded.emplace(std::move(name), std::move(m));
  }
  for (Parameter* p : params) {
    auto it = loaded.find(p->name);
    if (it == loaded.end()) {
      throw DataError("tensor archive " + path + " is missing parameter " + p->name);
    }
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols()) {
      throw ShapeError("tensor archive " + path + ": parameter " + p->name + " has shape " +
                       std::to_string(it->second.rows()) + "x" +
                       std::to_string(it->second.cols()) + ", expected " +
                       std::to_string(p->value.rows()) + "x" + std::to_string(p->value.cols()));
    }
    p->value = it->second;
    p->grad = Matrix::Zero(p->value.rows(), p->value.cols());
  }
  if (loaded.size() != params.size()) {
    throw DataError("tensor archive " + path + " holds " + std::to_string(loaded.size()) +
                    " tensors, model expects " + std::to_string(params.size()));
  }
}

}  // namespace bloomnet::nn
