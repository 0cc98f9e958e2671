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

#ifndef BLOOMNET_TENSOR_H_
#define BLOOMNET_TENSOR_H_

#include <Eigen/Core>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "bloomnet/common.hpp"

namespace bloomnet::nn {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

// A named, trainable tensor. Gradients accumulate across Tape::backward
// calls until zero_grad(). Frozen parameters (trainable == false) enter
// graphs as constants and never receive gradient.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool trainable = true;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}

  void zero_grad() { grad.setZero(); }
  long size() const { return value.size(); }
};

// Checksum of raw value bytes; bit-exact equality test across training.
uint64_t checksum(const Parameter& p);
uint64_t checksum(const std::vector<Parameter*>& params);

struct Node {
  Matrix value;
  Matrix grad;
  bool requires_grad = false;
  std::function<void(Node&)> backward;  // adds this node's grad into parents
};

// Handle into a Tape-owned node.
class Var {
 public:
  Var() = default;
  const Matrix& value() const { return node_->value; }
  const Matrix& grad() const { return node_->grad; }
  long rows() const { return node_->value.rows(); }
  long cols() const { return node_->value.cols(); }
  bool valid() const { return node_ != nullptr; }
  bool requires_grad() const { return node_->requires_grad; }

 private:
  friend class Tape;
  explicit Var(Node* n) : node_(n) {}
  Node* node_ = nullptr;
};

// Dynamic computation graph for one forward/backward pass. Nodes live in a
// deque so handles stay valid as the tape grows. Single-threaded use only.
class Tape {
 public:
  Var constant(Matrix v);
  Var leaf(Matrix v);              // differentiable leaf (tests, probes)
  Var param(Parameter& p);         // leaf wired to p.grad; constant if frozen

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var cmul(Var a, Var b);          // elementwise product
  Var scale(Var a, double s);
  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var add_row_broadcast(Var a, Var row);  // row (1 x n) added to every row of a

  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var gelu(Var a);
  Var softmax_rows(Var a);

  Var row(Var a, long i);                     // 1 x c view of row i
  Var rows(Var a, long start, long n);        // n x c block
  Var slice_cols(Var a, long start, long n);  // r x n block
  Var concat_cols(const std::vector<Var>& parts);
  Var stack_rows(const std::vector<Var>& parts);
  Var max_rows(Var a);                        // 1 x c columnwise max
  Var masked_mean_rows(Var a, const std::vector<int>& mask);  // 1 x c

  Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);
  Var embedding_rows(Parameter& table, const std::vector<int>& ids);
  Var dropout(Var a, double p, Rng& rng, bool training);

  // Mean cross-entropy straight from logits (log-sum-exp path); one row of
  // logits per example. Returns a 1x1 scalar.
  Var cross_entropy_logits(Var logits, const std::vector<int>& labels);

  void backward(Var root);  // root must be 1x1
  size_t node_count() const { return nodes_.size(); }

 private:
  Node* alloc(Matrix v, bool requires_grad);
  static void ensure_grad(Node* n);
  std::deque<Node> nodes_;
};

// Numerically stable softmax of a logit row (value-level helper).
RowVector softmax_stable(const RowVector& logits);

}  // namespace bloomnet::nn

#endif  // BLOOMNET_TENSOR_H_
