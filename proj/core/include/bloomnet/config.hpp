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

#ifndef BLOOMNET_CONFIG_H_
#define BLOOMNET_CONFIG_H_

#include <map>
#include <string>
#include <vector>

#include "bloomnet/harness.hpp"

namespace bloomnet {

// Flat INI-style experiment configuration with one level of sections.
// Environment variables override file values via the BLOOMNET_<SECTION>_<KEY>
// convention (for example BLOOMNET_TRAIN_SEED=7).
struct ExperimentConfig {
  // [data]
  std::string train_path;
  std::string ood_path;  // optional; never used for training
  std::string format = "csv";

  // [model]
  std::string model = "bloomnet";
  std::string rep_checkpoint;
  std::string pos_checkpoint;
  std::string ner_checkpoint;
  int encoder_max_len = 128;
  long hwa_embed_dim = 300;
  long hwa_hidden = 384;
  long hwa_attention_dim = 0;
  long hwa_layers = 1;
  int hwa_max_words = 128;
  double fusion_dropout = 0.0;

  // [baseline] free-form hyperparameter overrides
  std::map<std::string, std::string> baseline_hyperparams;

  // [train]
  double learning_rate = 2e-5;
  int epochs = 50;
  int batch_size = 32;
  int patience = 5;
  uint64_t seed = 42;
  double val_fraction = 0.10;

  // [folds]
  int k = 5;
  bool stratified = true;

  // [run]
  std::string output_dir = "runs";
  std::string run_id;
  int workers = 1;

  // [compare]
  std::vector<std::string> compare_models = {"tfidf_forest", "cnn", "lstm", "self_attention",
                                             "encoder_finetune", "bloomnet"};
  std::string reference = "bloomnet";

  bool operator==(const ExperimentConfig&) const = default;

  static ExperimentConfig from_ini_string(const std::string& text, bool apply_env = true);
  static ExperimentConfig from_ini_file(const std::string& path, bool apply_env = true);
  std::string to_ini() const;

  // Structural checks; with check_paths also requires referenced files.
  void validate(bool check_paths) const;

  TrainConfig train_config() const;
  BloomNetConfig bloomnet_config() const;
  EncoderConfig rep_encoder_config() const;
};

}  // namespace bloomnet

#endif  // BLOOMNET_CONFIG_H_
