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

#include "bloomnet/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

namespace bloomnet {

void TfidfVectorizer::fit(const std::vector<std::string>& corpus) {
  if (corpus.empty()) throw DataError("tfidf fit: empty corpus");
  std::map<std::string, long> df;  // ordered: vocabulary comes out sorted
  for (const std::string& doc : corpus) {
    std::vector<std::string> terms = unigrams(doc);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (const std::string& t : terms) df[t]++;
  }
  vocabulary_.clear();
  index_.clear();
  idf_.clear();
  double n = static_cast<double>(corpus.size());
  for (const auto& [term, count] : df) {
    index_[term] = static_cast<long>(vocabulary_.size());
    vocabulary_.push_back(term);
    idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
}

nn::Matrix TfidfVectorizer::transform(const std::vector<std::string>& corpus) const {
  if (!fitted()) throw DataError("tfidf transform: vectorizer not fitted");
  nn::Matrix out = nn::Matrix::Zero(static_cast<long>(corpus.size()), feature_count());
  for (size_t i = 0; i < corpus.size(); ++i) {
    out.row(static_cast<long>(i)) = transform_one(corpus[i]);
  }
  return out;
}

Eigen::RowVectorXd TfidfVectorizer::transform_one(const std::string& text) const {
  if (!fitted()) throw DataError("tfidf transform: vectorizer not fitted");
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(feature_count());
  for (const std::string& t : unigrams(text)) {
    auto it = index_.find(t);
    if (it != index_.end()) row(it->second) += 1.0;
  }
  for (long j = 0; j < feature_count(); ++j) row(j) *= idf_[static_cast<size_t>(j)];
  double norm = row.norm();
  if (norm > 0.0) row /= norm;
  return row;
}

nn::Matrix TfidfVectorizer::fit_transform(const std::vector<std::string>& corpus) {
  fit(corpus);
  return transform(corpus);
}

void TfidfVectorizer::write(std::ostream& out) const {
  uint64_t n = vocabulary_.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  for (size_t i = 0; i < vocabulary_.size(); ++i) {
    uint32_t len = static_cast<uint32_t>(vocabulary_[i].size());
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(vocabulary_[i].data(), len);
    out.write(reinterpret_cast<const char*>(&idf_[i]), sizeof(double));
  }
}

TfidfVectorizer TfidfVectorizer::read(std::istream& in) {
  TfidfVectorizer v;
  uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in) throw DataError("tfidf read: truncated stream");
  for (uint64_t i = 0; i < n; ++i) {
    uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string term(len, '\0');
    in.read(term.data(), len);
    double idf = 0.0;
    in.read(reinterpret_cast<char*>(&idf), sizeof(idf));
    if (!in) throw DataError("tfidf read: truncated stream");
    v.index_[term] = static_cast<long>(v.vocabulary_.size());
    v.vocabulary_.push_back(std::move(term));
    v.idf_.push_back(idf);
  }
  return v;
}

}  // namespace bloomnet
