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

#include "bloomnet/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include <nlohmann/json.hpp>

namespace bloomnet {

namespace fs = std::filesystem;

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw ConfigError("train config: learning_rate must be positive");
  if (epochs <= 0) throw ConfigError("train config: epochs must be positive");
  if (batch_size <= 0) throw ConfigError("train config: batch_size must be positive");
  if (patience < 0 || patience >= epochs) {
    throw ConfigError("train config: patience must be in [0, epochs)");
  }
  if (early_stop_metric != "val_macro_f1") {
    throw ConfigError("train config: unsupported early_stop_metric '" + early_stop_metric + "'");
  }
  if (val_fraction <= 0.0 || val_fraction >= 1.0) {
    throw ConfigError("train config: val_fraction must be in (0,1)");
  }
}

TrainHistory train_model(NeuralTextClassifier& model, const std::vector<Example>& train,
                         const std::vector<Example>& val, const TrainConfig& config) {
  config.validate();
  if (train.empty()) throw DataError("train_model: empty training split");
  for (const Example& t : train) {
    for (const Example& v : val) {
      if (t.id == v.id) throw DataError("train_model: id " + t.id + " appears in train and val");
    }
  }

  Rng root(config.seed);
  nn::AdamConfig adam_config{config.learning_rate, config.adam_beta1, config.adam_beta2,
                             config.adam_eps};
  std::vector<nn::Parameter*> trainable = model.trainable_parameters();
  if (trainable.empty()) throw ConfigError("train_model: model has no trainable parameters");
  nn::Adam optimizer(trainable, adam_config);

  TrainHistory history;
  std::unique_ptr<nn::ParameterSnapshot> best;
  bool use_early_stop = !val.empty();

  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng shuffle_rng = root.substream("shuffle", static_cast<uint64_t>(epoch));
    Rng dropout_rng = root.substream("dropout", static_cast<uint64_t>(epoch));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    long batches = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
      size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      std::vector<Example> batch;
      batch.reserve(end - start);
      for (size_t i = start; i < end; ++i) batch.push_back(train[order[i]]);

      nn::Tape tape;
      nn::Var loss = model.batch_loss(tape, batch, true, &dropout_rng);
      double loss_value = loss.value()(0, 0);
      if (!std::isfinite(loss_value)) {
        throw NumericError("train_model: non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batches));
      }
      optimizer.zero_grad();
      tape.backward(loss);
      optimizer.step();
      loss_sum += loss_value;
      ++batches;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(std::max<long>(1, batches));
    if (use_early_stop) {
      EvalRecord rec = evaluate(model, val);
      stats.val_metric = macro_f1(rec);
    }
    history.epochs.push_back(stats);
    history.epochs_ran = epoch;

    if (config.verbose) {
      std::printf("epoch %3d  loss %.4f  val_macro_f1 %.4f\n", epoch, stats.train_loss,
                  stats.val_metric);
    }

    if (use_early_stop) {
      if (history.best_epoch == 0 || stats.val_metric > history.best_metric) {
        history.best_epoch = epoch;
        history.best_metric = stats.val_metric;
        best = std::make_unique<nn::ParameterSnapshot>(trainable);
      } else if (epoch - history.best_epoch >= config.patience && config.patience > 0) {
        break;
      }
    }
  }

  if (use_early_stop && best) {
    best->restore(trainable);
  } else if (!use_early_stop) {
    history.best_epoch = history.epochs_ran;
    history.best_metric = history.epochs.empty() ? 0.0 : history.epochs.back().train_loss;
  }
  return history;
}

EvalRecord evaluate(TextClassifier& model, const std::vector<Example>& examples) {
  if (examples.empty()) throw DataError("evaluate: empty example list");
  EvalRecord rec;
  rec.golds.reserve(examples.size());
  rec.preds.reserve(examples.size());
  for (const Example& e : examples) {
    rec.golds.push_back(e.label);
    rec.preds.push_back(model.predict(e.text).predicted);
  }
  return rec;
}

void RunResult::recompute_aggregates() {
  aggregates.clear();
  auto collect = [&](const std::string& key, auto getter) {
    std::vector<double> values;
    for (const FoldMetrics& m : per_fold) {
      auto v = getter(m);
      if (v.has_value()) values.push_back(*v);
    }
    if (values.size() >= 2) aggregates[key] = aggregate_folds(values);
  };
  collect("iid_accuracy",
          [](const FoldMetrics& m) { return std::optional<double>(m.iid_accuracy); });
  collect("iid_macro_f1",
          [](const FoldMetrics& m) { return std::optional<double>(m.iid_macro_f1); });
  collect("ood_accuracy", [](const FoldMetrics& m) { return m.ood_accuracy; });
  collect("ood_macro_f1", [](const FoldMetrics& m) { return m.ood_macro_f1; });
}

std::string RunResult::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model_name;
  j["k"] = k;
  j["per_fold"] = nlohmann::ordered_json::array();
  for (const FoldMetrics& m : per_fold) {
    nlohmann::ordered_json f;
    f["fold"] = m.fold;
    f["iid_accuracy"] = m.iid_accuracy;
    f["iid_macro_f1"] = m.iid_macro_f1;
    if (m.ood_accuracy) f["ood_accuracy"] = *m.ood_accuracy;
    if (m.ood_macro_f1) f["ood_macro_f1"] = *m.ood_macro_f1;
    f["epochs_ran"] = m.epochs_ran;
    j["per_fold"].push_back(f);
  }
  j["aggregates"] = nlohmann::ordered_json::object();
  for (const auto& [key, ms] : aggregates) {
    j["aggregates"][key] = {{"mean", ms.mean}, {"std", ms.std}};
  }
  return j.dump(2);
}

RunResult RunResult::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  RunResult r;
  r.model_name = j.at("model").get<std::string>();
  r.k = j.at("k").get<int>();
  for (const auto& f : j.at("per_fold")) {
    FoldMetrics m;
    m.fold = f.at("fold").get<int>();
    m.iid_accuracy = f.at("iid_accuracy").get<double>();
    m.iid_macro_f1 = f.at("iid_macro_f1").get<double>();
    if (f.contains("ood_accuracy")) m.ood_accuracy = f["ood_accuracy"].get<double>();
    if (f.contains("ood_macro_f1")) m.ood_macro_f1 = f["ood_macro_f1"].get<double>();
    m.epochs_ran = f.value("epochs_ran", 0);
    r.per_fold.push_back(m);
  }
  r.recompute_aggregates();
  return r;
}

namespace {

FoldMetrics run_one_fold(const ModelFactory& factory, const Dataset& dataset,
                         const FoldPlan& plan, const TrainConfig& config,
                         const CrossValOptions& options, int fold, std::string* name_out) {
  TrainTestSplit split = split_by_fold(dataset, plan, fold);

  // No-leak check: the held-out fold must be disjoint from training ids.
  for (const Example& te : split.test) {
    if (plan.assignment.at(te.id) != fold) throw DataError("cross_validate: fold leak detected");
  }

  Rng val_rng = Rng(config.seed).substream("val-slice", static_cast<uint64_t>(fold));
  TrainValSplit tv = carve_validation(split.train, config.val_fraction, val_rng);

  std::unique_ptr<TextClassifier> model = factory();
  if (fold == 0 && name_out != nullptr) *name_out = model->name();
  TrainHistory history;
  model->fit(tv.train, tv.val, config, &history);

  FoldMetrics metrics;
  metrics.fold = fold;
  metrics.epochs_ran = history.epochs_ran;
  EvalRecord iid = evaluate(*model, split.test);
  metrics.iid_accuracy = accuracy(iid);
  metrics.iid_macro_f1 = macro_f1(iid);

  if (options.ood_dataset != nullptr) {
    EvalRecord ood = evaluate(*model, options.ood_dataset->examples());
    metrics.ood_accuracy = accuracy(ood);
    metrics.ood_macro_f1 = macro_f1(ood);
  }

  if (!options.checkpoint_dir.empty()) {
    fs::path dir = fs::path(options.checkpoint_dir) / ("fold_" + std::to_string(fold));
    model->save(dir.string());
  }
  return metrics;
}

}  // namespace

RunResult cross_validate(const ModelFactory& factory, const Dataset& dataset, const FoldPlan& plan,
                         const TrainConfig& config, const CrossValOptions& options) {
  config.validate();
  if (plan.assignment.size() != dataset.size()) {
    throw DataError("cross_validate: fold plan does not cover the dataset");
  }
  if (options.ood_dataset != nullptr) {
    // OOD ids must be disjoint from the training corpus.
    for (const Example& e : options.ood_dataset->examples()) {
      if (plan.assignment.count(e.id) > 0) {
        throw DataError("cross_validate: OOD example " + e.id + " overlaps the training dataset");
      }
    }
  }

  RunResult result;
  result.k = plan.k;
  result.per_fold.resize(static_cast<size_t>(plan.k));
  std::string model_name;  // written by fold 0 only

  int workers = std::max(1, options.workers);
  if (workers == 1) {
    for (int fold = 0; fold < plan.k; ++fold) {
      result.per_fold[static_cast<size_t>(fold)] =
          run_one_fold(factory, dataset, plan, config, options, fold, &model_name);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(plan.k));
    auto worker = [&] {
      for (;;) {
        int fold = next.fetch_add(1);
        if (fold >= plan.k) return;
        try {
          result.per_fold[static_cast<size_t>(fold)] =
              run_one_fold(factory, dataset, plan, config, options, fold, &model_name);
        } catch (...) {
          errors[static_cast<size_t>(fold)] = std::current_exception();
        }
      }
    };
    for (int w = 0; w < std::min(workers, plan.k); ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  result.model_name = model_name;
  result.recompute_aggregates();
  return result;
}

std::vector<FoldMetrics> evaluate_ood(std::vector<TextClassifier*> fold_models,
                                      const Dataset& ood_dataset) {
  if (fold_models.empty()) throw DataError("evaluate_ood: no fold models");
  std::vector<FoldMetrics> out;
  int fold = 0;
  for (TextClassifier* model : fold_models) {
    EvalRecord rec = evaluate(*model, ood_dataset.examples());
    FoldMetrics m;
    m.fold = fold++;
    m.ood_accuracy = accuracy(rec);
    m.ood_macro_f1 = macro_f1(rec);
    out.push_back(m);
  }
  return out;
}

AblationTable run_ablation(const VariantFactory& factory, const Dataset& dataset,
                           const FoldPlan& plan, const TrainConfig& config,
                           const CrossValOptions& options) {
  struct VariantSpec {
    bool use_hwa;
    bool use_pos_ner;
  };
  const std::vector<VariantSpec> variants = {
      {false, false},  // base
      {true, false},   // +WA
      {false, true},   // +POS-NER
      {true, true},    // +WA+POS-NER
  };
  AblationTable table;
  for (const VariantSpec& v : variants) {
    CrossValOptions opts = options;
    if (!options.checkpoint_dir.empty()) {
      opts.checkpoint_dir = (fs::path(options.checkpoint_dir) /
                             variant_name(v.use_hwa, v.use_pos_ner))
                                .string();
    }
    ModelFactory mf = [&factory, v]() { return factory(v.use_hwa, v.use_pos_ner); };
    RunResult row = cross_validate(mf, dataset, plan, config, opts);
    row.model_name = variant_name(v.use_hwa, v.use_pos_ner);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bloomnet
