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

#include "bloomnet/forest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace bloomnet {

namespace {

int majority_label(const std::vector<int>& counts) {
  int best = 0;
  for (size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

double gini(const std::vector<int>& counts, int total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (int c : counts) {
    double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

}  // namespace

void RandomForestClassifier::fit(const nn::Matrix& features, const std::vector<int>& labels,
                                 int n_classes, const ForestConfig& config) {
  long n = features.rows();
  if (n == 0) throw DataError("forest fit: empty feature matrix");
  if (static_cast<long>(labels.size()) != n) {
    throw ShapeError("forest fit: feature rows and label count differ");
  }
  if (n_classes < 2) throw ConfigError("forest fit: need at least 2 classes");
  std::vector<int> label_counts(static_cast<size_t>(n_classes), 0);
  for (int label : labels) {
    if (label < 0 || label >= n_classes) throw DataError("forest fit: label out of range");
    label_counts[static_cast<size_t>(label)]++;
  }
  int present = 0;
  for (int c : label_counts) present += (c > 0);
  if (present < 2) throw DataError("forest fit: training set has a single class");

  n_features_ = features.cols();
  n_classes_ = n_classes;
  config_ = config;
  trees_.clear();
  trees_.reserve(static_cast<size_t>(config.n_trees));

  long m = config.max_features > 0
               ? std::min<long>(config.max_features, n_features_)
               : std::max<long>(1, static_cast<long>(std::sqrt(static_cast<double>(n_features_))));

  std::vector<long> feature_pool(static_cast<size_t>(n_features_));
  for (long j = 0; j < n_features_; ++j) feature_pool[static_cast<size_t>(j)] = j;

  for (int t = 0; t < config.n_trees; ++t) {
    Rng rng = Rng(config.seed).substream("tree", static_cast<uint64_t>(t));

    std::vector<long> sample(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
      sample[static_cast<size_t>(i)] = rng.uniform_int(static_cast<int>(n));
    }

    Tree tree;
    // Iterative growth with an explicit stack of (node index, samples, depth).
    struct Work {
      int node;
      std::vector<long> idx;
      int depth;
    };
    tree.push_back(TreeNode{});
    std::vector<Work> stack;
    stack.push_back(Work{0, std::move(sample), 0});

    while (!stack.empty()) {
      Work w = std::move(stack.back());
      stack.pop_back();

      std::vector<int> counts(static_cast<size_t>(n_classes), 0);
      for (long i : w.idx) counts[static_cast<size_t>(labels[static_cast<size_t>(i)])]++;
      int node_total = static_cast<int>(w.idx.size());
      bool pure = false;
      for (int c : counts) {
        if (c == node_total) pure = true;
      }
      bool depth_capped = config.max_depth > 0 && w.depth >= config.max_depth;
      if (pure || depth_capped || node_total < config.min_samples_split) {
        tree[static_cast<size_t>(w.node)].label = majority_label(counts);
        continue;
      }

      // Random feature subset: partial Fisher-Yates over the pool.
      std::vector<long> pool = feature_pool;
      for (long i = 0; i < m; ++i) {
        long j = i + rng.uniform_int(static_cast<int>(static_cast<long>(pool.size()) - i));
        std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
      }

      double best_impurity = std::numeric_limits<double>::infinity();
      long best_feature = -1;
      double best_threshold = 0.0;
      std::vector<std::pair<double, int>> values(w.idx.size());
      for (long f = 0; f < m; ++f) {
        long feature = pool[static_cast<size_t>(f)];
        for (size_t i = 0; i < w.idx.size(); ++i) {
          values[i] = {features(w.idx[i], feature), labels[static_cast<size_t>(w.idx[i])]};
        }
        std::sort(values.begin(), values.end());
        if (values.front().first == values.back().first) continue;  // constant feature

        std::vector<int> left_counts(static_cast<size_t>(n_classes), 0);
        std::vector<int> right_counts = counts;
        int left_total = 0;
        int right_total = node_total;
        for (size_t i = 0; i + 1 < values.size(); ++i) {
          left_counts[static_cast<size_t>(values[i].second)]++;
          right_counts[static_cast<size_t>(values[i].second)]--;
          ++left_total;
          --right_total;
          if (values[i].first == values[i + 1].first) continue;
          double impurity = (static_cast<double>(left_total) * gini(left_counts, left_total) +
                             static_cast<double>(right_total) * gini(right_counts, right_total)) /
                            static_cast<double>(node_total);
          if (impurity < best_impurity) {
            best_impurity = impurity;
            best_feature = feature;
            best_threshold = 0.5 * (values[i].first + values[i + 1].first);
          }
        }
      }

      if (best_feature < 0) {
        tree[static_cast<size_t>(w.node)].label = majority_label(counts);
        continue;
      }

      std::vector<long> left_idx, right_idx;
      for (long i : w.idx) {
        if (features(i, best_feature) <= best_threshold) left_idx.push_back(i);
        else right_idx.push_back(i);
      }
      if (left_idx.empty() || right_idx.empty()) {
        tree[static_cast<size_t>(w.node)].label = majority_label(counts);
        continue;
      }

      int left_node = static_cast<int>(tree.size());
      tree.push_back(TreeNode{});
      int right_node = static_cast<int>(tree.size());
      tree.push_back(TreeNode{});
      tree[static_cast<size_t>(w.node)].feature = static_cast<int>(best_feature);
      tree[static_cast<size_t>(w.node)].threshold = best_threshold;
      tree[static_cast<size_t>(w.node)].left = left_node;
      tree[static_cast<size_t>(w.node)].right = right_node;
      stack.push_back(Work{right_node, std::move(right_idx), w.depth + 1});
      stack.push_back(Work{left_node, std::move(left_idx), w.depth + 1});
    }
    trees_.push_back(std::move(tree));
  }
}

int RandomForestClassifier::tree_predict(const Tree& tree,
                                         const Eigen::RowVectorXd& features) const {
  int node = 0;
  for (;;) {
    const TreeNode& n = tree[static_cast<size_t>(node)];
    if (n.feature < 0) return n.label;
    node = features(n.feature) <= n.threshold ? n.left : n.right;
  }
}

std::vector<double> RandomForestClassifier::vote_fractions(
    const Eigen::RowVectorXd& features) const {
  if (!fitted()) throw DataError("forest predict: not fitted");
  if (features.size() != n_features_) {
    throw ShapeError("forest predict: feature width " + std::to_string(features.size()) +
                     " != training width " + std::to_string(n_features_));
  }
  std::vector<double> votes(static_cast<size_t>(n_classes_), 0.0);
  for (const Tree& tree : trees_) {
    votes[static_cast<size_t>(tree_predict(tree, features))] += 1.0;
  }
  for (double& v : votes) v /= static_cast<double>(trees_.size());
  return votes;
}

int RandomForestClassifier::predict(const Eigen::RowVectorXd& features) const {
  std::vector<double> votes = vote_fractions(features);
  int best = 0;
  for (size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[static_cast<size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

void RandomForestClassifier::write(std::ostream& out) const {
  auto put = [&out](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  uint64_t n_trees = trees_.size();
  put(n_trees);
  put(n_features_);
  put(n_classes_);
  for (const Tree& tree : trees_) {
    uint64_t n_nodes = tree.size();
    put(n_nodes);
    for (const TreeNode& n : tree) {
      put(n.feature);
      put(n.threshold);
      put(n.left);
      put(n.right);
      put(n.label);
    }
  }
}

RandomForestClassifier RandomForestClassifier::read(std::istream& in) {
  RandomForestClassifier forest;
  auto get = [&in](auto& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw DataError("forest read: truncated stream");
  };
  uint64_t n_trees = 0;
  get(n_trees);
  get(forest.n_features_);
  get(forest.n_classes_);
  for (uint64_t t = 0; t < n_trees; ++t) {
    uint64_t n_nodes = 0;
    get(n_nodes);
    Tree tree(n_nodes);
    for (uint64_t i = 0; i < n_nodes; ++i) {
      get(tree[i].feature);
      get(tree[i].threshold);
      get(tree[i].left);
      get(tree[i].right);
      get(tree[i].label);
    }
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

}  // namespace bloomnet
