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

#ifndef BLOOMNET_FOREST_H_
#define BLOOMNET_FOREST_H_

#include <iosfwd>
#include <vector>

#include "bloomnet/tensor.hpp"

namespace bloomnet {

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 0;        // 0 = unlimited
  int min_samples_split = 2;
  int max_features = 0;     // 0 = sqrt(feature count)
  uint64_t seed = 42;
};

// Bootstrap-aggregated CART trees with Gini splits over random feature
// subsets; prediction is a majority vote (ties to the lowest class).
// Deterministic under a fixed seed.
class RandomForestClassifier {
 public:
  void fit(const nn::Matrix& features, const std::vector<int>& labels, int n_classes,
           const ForestConfig& config);
  int predict(const Eigen::RowVectorXd& features) const;
  std::vector<double> vote_fractions(const Eigen::RowVectorXd& features) const;

  bool fitted() const { return !trees_.empty(); }
  long feature_count() const { return n_features_; }
  int n_classes() const { return n_classes_; }
  const ForestConfig& config() const { return config_; }

  void write(std::ostream& out) const;
  static RandomForestClassifier read(std::istream& in);

 private:
  struct TreeNode {
    int feature = -1;          // -1 marks a leaf
    double threshold = 0.0;    // go left when value <= threshold
    int left = -1;
    int right = -1;
    int label = -1;            // leaf majority class
  };
  using Tree = std::vector<TreeNode>;

  int tree_predict(const Tree& tree, const Eigen::RowVectorXd& features) const;

  std::vector<Tree> trees_;
  long n_features_ = 0;
  int n_classes_ = 0;
  ForestConfig config_;
};

}  // namespace bloomnet

#endif  // BLOOMNET_FOREST_H_
