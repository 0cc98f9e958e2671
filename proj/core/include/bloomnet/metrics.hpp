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

#ifndef BLOOMNET_METRICS_H_
#define BLOOMNET_METRICS_H_

#include <array>
#include <vector>

#include "bloomnet/corpus.hpp"

namespace bloomnet {

struct EvalRecord {
  std::vector<CognitiveLevel> golds;
  std::vector<CognitiveLevel> preds;
  void validate() const;
};

using ConfusionMatrix = std::array<std::array<int, kNumLevels>, kNumLevels>;  // [gold][pred]

ConfusionMatrix confusion_matrix(const EvalRecord& rec);

double accuracy(const EvalRecord& rec);

// Unweighted mean of per-class F1 over the six schema classes. Classes with
// no gold and no predicted instances are excluded from the mean; classes
// with zero precision+recall contribute F1 = 0.
double macro_f1(const EvalRecord& rec);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1)
};

MeanStd aggregate_folds(const std::vector<double>& values);

struct SignificanceResult {
  double t_statistic = 0.0;
  double t_p = 1.0;            // two-sided paired t-test
  double permutation_p = 1.0;  // exact paired sign-flip enumeration
  int n = 0;
};

// Paired, fold-aligned comparison of two score lists. Zero-variance
// differences: p = 1 when all differences are zero, otherwise the t column
// reports the exact permutation result.
SignificanceResult paired_significance(const std::vector<double>& scores_a,
                                       const std::vector<double>& scores_b);

}  // namespace bloomnet

#endif  // BLOOMNET_METRICS_H_
