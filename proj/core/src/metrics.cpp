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

#include "bloomnet/metrics.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

namespace bloomnet {

void EvalRecord::validate() const {
  if (golds.empty()) throw DataError("EvalRecord: empty record");
  if (golds.size() != preds.size()) {
    throw DataError("EvalRecord: golds and preds lengths differ (" +
                    std::to_string(golds.size()) + " vs " + std::to_string(preds.size()) + ")");
  }
}

ConfusionMatrix confusion_matrix(const EvalRecord& rec) {
  rec.validate();
  ConfusionMatrix m{};
  for (size_t i = 0; i < rec.golds.size(); ++i) {
    m[static_cast<size_t>(rec.golds[i])][static_cast<size_t>(rec.preds[i])]++;
  }
  return m;
}

double accuracy(const EvalRecord& rec) {
  rec.validate();
  size_t hits = 0;
  for (size_t i = 0; i < rec.golds.size(); ++i) {
    if (rec.golds[i] == rec.preds[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rec.golds.size());
}

double macro_f1(const EvalRecord& rec) {
  ConfusionMatrix m = confusion_matrix(rec);
  double sum = 0.0;
  int used = 0;
  for (int c = 0; c < kNumLevels; ++c) {
    int tp = m[static_cast<size_t>(c)][static_cast<size_t>(c)];
    int gold_total = 0;
    int pred_total = 0;
    for (int j = 0; j < kNumLevels; ++j) {
      gold_total += m[static_cast<size_t>(c)][static_cast<size_t>(j)];
      pred_total += m[static_cast<size_t>(j)][static_cast<size_t>(c)];
    }
    if (gold_total == 0 && pred_total == 0) continue;  // class absent everywhere
    ++used;
    int denom = gold_total + pred_total;  // == (TP+FN) + (TP+FP)
    if (denom > 0 && tp > 0) {
      sum += 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    }
    // else precision+recall is zero: contributes 0
  }
  return used > 0 ? sum / static_cast<double>(used) : 0.0;
}

MeanStd aggregate_folds(const std::vector<double>& values) {
  if (values.size() < 2) throw DataError("aggregate_folds: need at least 2 values");
  double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return MeanStd{mean, std::sqrt(ss / (n - 1.0))};
}

namespace {

// Exact two-sided paired permutation p-value: fraction of the 2^n sign
// assignments whose |mean difference| reaches the observed one.
double exact_permutation_p(const std::vector<double>& diffs) {
  size_t n = diffs.size();
  if (n > 20) throw ConfigError("paired_significance: exact enumeration limited to n <= 20");
  double observed = 0.0;
  for (double d : diffs) observed += d;
  observed = std::abs(observed / static_cast<double>(n));
  const double tol = 1e-12 * (1.0 + observed);
  uint64_t total = 1ULL << n;
  uint64_t count = 0;
  for (uint64_t bits = 0; bits < total; ++bits) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double d = diffs[i];
      s += (bits >> i) & 1ULL ? -d : d;
    }
    if (std::abs(s / static_cast<double>(n)) >= observed - tol) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

SignificanceResult paired_significance(const std::vector<double>& scores_a,
                                       const std::vector<double>& scores_b) {
  if (scores_a.size() != scores_b.size()) {
    throw DataError("paired_significance: score lists must be fold-aligned");
  }
  if (scores_a.size() < 2) throw DataError("paired_significance: need at least 2 folds");

  size_t n = scores_a.size();
  std::vector<double> diffs(n);
  bool all_zero = true;
  for (size_t i = 0; i < n; ++i) {
    diffs[i] = scores_a[i] - scores_b[i];
    if (diffs[i] != 0.0) all_zero = false;
  }

  SignificanceResult result;
  result.n = static_cast<int>(n);
  result.permutation_p = exact_permutation_p(diffs);

  if (all_zero) {
    result.t_statistic = 0.0;
    result.t_p = 1.0;
    return result;
  }

  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  double sd = std::sqrt(ss / (static_cast<double>(n) - 1.0));

  if (sd == 0.0) {
    // Constant nonzero shift: t undefined; fall back to the exact test.
    result.t_statistic = std::numeric_limits<double>::infinity();
    result.t_p = result.permutation_p;
    return result;
  }

  double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t_distribution<double> dist(static_cast<double>(n) - 1.0);
  result.t_statistic = t;
  result.t_p = 2.0 * boost::math::cdf(dist, -std::abs(t));
  return result;
}

}  // namespace bloomnet
