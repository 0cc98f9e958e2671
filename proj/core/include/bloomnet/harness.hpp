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

#ifndef BLOOMNET_HARNESS_H_
#define BLOOMNET_HARNESS_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bloomnet/metrics.hpp"
#include "bloomnet/model.hpp"

namespace bloomnet {

struct TrainConfig {
  double learning_rate = 2e-5;
  int epochs = 50;
  int batch_size = 32;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::string early_stop_metric = "val_macro_f1";
  int patience = 5;
  uint64_t seed = 42;
  double val_fraction = 0.10;  // carved from each fold's training portion
  bool verbose = false;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_metric = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;
  double best_metric = 0.0;
  int epochs_ran = 0;
};

// Mini-batch gradient descent with Adam, early stopping on the validation
// metric, best-epoch restoration. Aborts with NumericError on non-finite
// loss. With an empty validation set, runs the full epoch budget.
TrainHistory train_model(NeuralTextClassifier& model, const std::vector<Example>& train,
                         const std::vector<Example>& val, const TrainConfig& config);

EvalRecord evaluate(TextClassifier& model, const std::vector<Example>& examples);

struct FoldMetrics {
  int fold = 0;
  double iid_accuracy = 0.0;
  double iid_macro_f1 = 0.0;
  std::optional<double> ood_accuracy;
  std::optional<double> ood_macro_f1;
  int epochs_ran = 0;
};

struct RunResult {
  std::string model_name;
  int k = 0;
  std::vector<FoldMetrics> per_fold;
  std::map<std::string, MeanStd> aggregates;

  void recompute_aggregates();
  std::string to_json() const;
  static RunResult from_json(const std::string& json_text);
};

using ModelFactory = std::function<std::unique_ptr<TextClassifier>()>;

struct CrossValOptions {
  const Dataset* ood_dataset = nullptr;  // never used for training
  std::string checkpoint_dir;            // per-fold checkpoints when set
  int workers = 1;                       // folds run in parallel when > 1
};

// For each fold: train a fresh model on the other folds (with a stratified
// validation slice carved from the training portion), score the held-out
// fold, and, when provided, score the full OOD set with that fold's model.
RunResult cross_validate(const ModelFactory& factory, const Dataset& dataset, const FoldPlan& plan,
                         const TrainConfig& config, const CrossValOptions& options = {});

// Score already-trained fold models on an OOD dataset.
std::vector<FoldMetrics> evaluate_ood(std::vector<TextClassifier*> fold_models,
                                      const Dataset& ood_dataset);

struct AblationTable {
  std::vector<RunResult> rows;  // base, +WA, +POS-NER, +WA+POS-NER
};

// Factory parameterized by branch selection; the harness drives it through
// the four Table-3 variants with identical folds and seeds.
using VariantFactory =
    std::function<std::unique_ptr<TextClassifier>(bool use_hwa, bool use_pos_ner)>;

AblationTable run_ablation(const VariantFactory& factory, const Dataset& dataset,
                           const FoldPlan& plan, const TrainConfig& config,
                           const CrossValOptions& options = {});

}  // namespace bloomnet

#endif  // BLOOMNET_HARNESS_H_
