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

#ifndef BLOOMNET_TFIDF_H_
#define BLOOMNET_TFIDF_H_

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "bloomnet/tensor.hpp"

namespace bloomnet {

// tf-idf over lowercased, punctuation-stripped word unigrams.
// weight(i,j) = count(i,j) * idf(j), idf(j) = ln((1+N)/(1+df_j)) + 1,
// rows L2-normalized. Transform never extends the fitted vocabulary.
class TfidfVectorizer {
 public:
  void fit(const std::vector<std::string>& corpus);
  nn::Matrix transform(const std::vector<std::string>& corpus) const;
  nn::Matrix fit_transform(const std::vector<std::string>& corpus);
  Eigen::RowVectorXd transform_one(const std::string& text) const;

  bool fitted() const { return !vocabulary_.empty(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  long feature_count() const { return static_cast<long>(vocabulary_.size()); }

  void write(std::ostream& out) const;
  static TfidfVectorizer read(std::istream& in);

 private:
  std::vector<std::string> vocabulary_;  // sorted
  std::unordered_map<std::string, long> index_;
  std::vector<double> idf_;
};

}  // namespace bloomnet

#endif  // BLOOMNET_TFIDF_H_
