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

#ifndef BLOOMNET_NN_H_
#define BLOOMNET_NN_H_

#include <memory>
#include <string>
#include <vector>

#include "bloomnet/tensor.hpp"

namespace bloomnet::nn {

// Xavier-uniform init for a (rows x cols) weight acting as out x in.
Matrix xavier_uniform(long rows, long cols, Rng& rng);
Matrix normal_init(long rows, long cols, double stddev, Rng& rng);

// y = x * W^T + b, with x (r x in), W (out x in), b (1 x out).
class Linear {
 public:
  Linear(const std::string& name, long in, long out, Rng& rng);
  Var forward(Tape& t, Var x);
  void collect(std::vector<Parameter*>& out);
  Parameter& weight() { return w_; }
  Parameter& bias() { return b_; }
  long in_dim() const { return w_.value.cols(); }
  long out_dim() const { return w_.value.rows(); }

 private:
  Parameter w_, b_;
};

class LayerNorm {
 public:
  LayerNorm(const std::string& name, long dim);
  Var forward(Tape& t, Var x);
  void collect(std::vector<Parameter*>& out);

 private:
  Parameter gamma_, beta_;
};

// Multi-head self-attention with an additive key-mask bias. key_mask_bias is
// a (len x len) constant: 0 for visible keys, a large negative value for
// masked keys, identical across query rows.
class MultiHeadSelfAttention {
 public:
  MultiHeadSelfAttention(const std::string& name, long dim, long heads, Rng& rng);
  Var forward(Tape& t, Var x, const Matrix& key_mask_bias);
  void collect(std::vector<Parameter*>& out);
  long dim() const { return dim_; }

 private:
  long dim_, heads_, head_dim_;
  Linear q_, k_, v_, o_;
};

// Position-wise feed-forward: Linear -> GELU -> Linear.
class FeedForward {
 public:
  FeedForward(const std::string& name, long dim, long inner, Rng& rng);
  Var forward(Tape& t, Var x);
  void collect(std::vector<Parameter*>& out);

 private:
  Linear in_, out_;
};

// Post-norm transformer block.
class TransformerLayer {
 public:
  TransformerLayer(const std::string& name, long dim, long heads, long inner, Rng& rng);
  Var forward(Tape& t, Var x, const Matrix& key_mask_bias, double dropout_p, Rng* dropout_rng,
              bool training);
  void collect(std::vector<Parameter*>& out);

 private:
  MultiHeadSelfAttention attn_;
  LayerNorm ln1_;
  FeedForward ffn_;
  LayerNorm ln2_;
};

// Single-direction gated recurrent cell (coupled reset gate on the candidate
// state, separate candidate biases).
class GruCell {
 public:
  GruCell(const std::string& name, long in, long hidden, Rng& rng);
  // x: 1 x in, h: 1 x hidden -> new hidden 1 x hidden.
  Var step(Tape& t, Var x, Var h);
  void collect(std::vector<Parameter*>& out);
  long hidden() const { return hidden_; }

 private:
  long hidden_;
  Parameter wr_, wz_, wn_;  // hidden x in
  Parameter ur_, uz_, un_;  // hidden x hidden
  Parameter br_, bz_, bn_, bhn_;  // 1 x hidden
};

// Bidirectional multi-layer GRU over a sequence of 1 x in rows. Output per
// position is the concatenation of both directions (1 x 2*hidden).
class BiGru {
 public:
  BiGru(const std::string& name, long in, long hidden, long layers, Rng& rng);
  std::vector<Var> forward(Tape& t, const std::vector<Var>& inputs);
  void collect(std::vector<Parameter*>& out);
  long out_dim() const { return 2 * hidden_; }

 private:
  long hidden_, layers_;
  std::vector<std::unique_ptr<GruCell>> fwd_, bwd_;
};

// Single-direction LSTM cell.
class LstmCell {
 public:
  LstmCell(const std::string& name, long in, long hidden, Rng& rng);
  struct State {
    Var h, c;
  };
  State step(Tape& t, Var x, State s);
  void collect(std::vector<Parameter*>& out);
  long hidden() const { return hidden_; }

 private:
  long hidden_;
  Parameter wi_, wf_, wg_, wo_;  // hidden x in
  Parameter ui_, uf_, ug_, uo_;  // hidden x hidden
  Parameter bi_, bf_, bg_, bo_;  // 1 x hidden
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam over an explicit parameter set. Frozen parameters must not be listed.
class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamConfig config);
  void step();
  void zero_grad();
  const std::vector<Parameter*>& params() const { return params_; }

 private:
  std::vector<Parameter*> params_;
  AdamConfig config_;
  std::vector<Matrix> m_, v_;
  long t_ = 0;
};

// Value snapshot of a parameter set, for best-epoch restoration.
class ParameterSnapshot {
 public:
  explicit ParameterSnapshot(const std::vector<Parameter*>& params);
  void restore(const std::vector<Parameter*>& params) const;

 private:
  std::vector<Matrix> values_;
};

// Binary tensor archive used by every checkpoint format: parameters stored
// by name with shapes, float64 little-endian.
void save_parameters(const std::string& path, const std::vector<Parameter*>& params);
void load_parameters(const std::string& path, const std::vector<Parameter*>& params);

}  // namespace bloomnet::nn

#endif  // BLOOMNET_NN_H_
