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

#ifndef BLOOMNET_MODEL_H_
#define BLOOMNET_MODEL_H_

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bloomnet/corpus.hpp"
#include "bloomnet/encoders.hpp"
#include "bloomnet/hwa.hpp"

namespace bloomnet {

struct TrainConfig;   // harness.hpp
struct TrainHistory;  // harness.hpp

struct ClassDistribution {
  std::array<double, kNumLevels> probs{};
  CognitiveLevel predicted = CognitiveLevel::kKnowledge;

  // Stable softmax; argmax ties break toward the lowest ordinal.
  static ClassDistribution from_logits(const nn::RowVector& logits);
  void validate(double tol = 1e-6) const;
};

// Order-preserving concatenation rep | pos | ner | hwa with per-branch
// provenance. Absent branches record dimension 0.
struct FusedRepresentation {
  nn::RowVector vector;
  std::array<long, 4> branch_dims{};  // indexed by Branch

  long dim() const { return vector.size(); }
  // Copy of the segment belonging to `branch`; throws if absent.
  nn::RowVector segment(Branch branch) const;
};

// Branch tags must appear in canonical order with no duplicates and the
// representation branch present.
FusedRepresentation fuse(const std::vector<PooledRepresentation>& parts);
FusedRepresentation fuse(const PooledRepresentation& rep, const PooledRepresentation& pos,
                         const PooledRepresentation& ner, const PooledRepresentation& hwa);

class ClassifierHead {
 public:
  ClassifierHead(long input_dim, Rng& rng);
  nn::Var forward(nn::Tape& t, nn::Var fused);  // logits, rows x 6
  long input_dim() const { return weight_.value.cols(); }
  nn::Parameter& weight() { return weight_; }
  nn::Parameter& bias() { return bias_; }
  const nn::Parameter& weight() const { return weight_; }
  const nn::Parameter& bias() const { return bias_; }
  void collect(std::vector<nn::Parameter*>& out);

 private:
  nn::Parameter weight_;  // 6 x D
  nn::Parameter bias_;    // 1 x 6
};

// probs = softmax(weight * H + bias).
ClassDistribution classify(const FusedRepresentation& fused, const ClassifierHead& head);

// Mean negative log-likelihood straight from logits (log-sum-exp path).
double nll_from_logits(const nn::RowVector& logits, CognitiveLevel gold);

// Contract shared by BloomNet and every baseline: train on a split, predict
// a class distribution for raw text.
class TextClassifier {
 public:
  virtual ~TextClassifier() = default;
  virtual const std::string& name() const = 0;
  virtual ClassDistribution predict(const std::string& text) = 0;
  virtual void fit(const std::vector<Example>& train, const std::vector<Example>& val,
                   const TrainConfig& config, TrainHistory* history = nullptr) = 0;
  virtual void save(const std::string& dir) const = 0;
};

// Gradient-trained classifiers share the tape/optimizer plumbing; fit() is
// the harness training loop.
class NeuralTextClassifier : public TextClassifier {
 public:
  virtual std::vector<nn::Parameter*> parameters() = 0;
  std::vector<nn::Parameter*> trainable_parameters();
  // Builds the mean batch loss graph. `training` enables dropout.
  virtual nn::Var batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                             Rng* dropout_rng) = 0;
  void fit(const std::vector<Example>& train, const std::vector<Example>& val,
           const TrainConfig& config, TrainHistory* history = nullptr) override;
  uint64_t parameter_checksum();
};

struct BloomNetConfig {
  EncoderConfig rep;
  EncoderConfig pos;
  EncoderConfig ner;
  HwaConfig hwa;
  bool use_pos = true;
  bool use_ner = true;
  bool use_hwa = true;
  double fusion_dropout = 0.0;
  uint64_t seed = 42;
  std::string name;  // defaults to the variant name

  void validate() const;
};

// Ablation naming per branch content ("base", "+WA", "+POS-NER",
// "+WA+POS-NER").
std::string variant_name(bool use_hwa, bool use_pos_ner);

class BloomNetModel : public NeuralTextClassifier {
 public:
  // Builds encoders from their checkpoints; the HWA word vocabulary is
  // built from `vocab_texts`.
  BloomNetModel(const BloomNetConfig& config, const std::vector<std::string>& vocab_texts);

  const std::string& name() const override { return name_; }
  ClassDistribution predict(const std::string& text) override;
  nn::Var batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                     Rng* dropout_rng) override;
  std::vector<nn::Parameter*> parameters() override;

  // Pooled branch vectors for one text (eval mode).
  std::vector<PooledRepresentation> branch_representations(const std::string& text);

  nn::Var forward_logits(nn::Tape& t, const std::string& text, bool training, Rng* dropout_rng);

  long fusion_dim() const { return fusion_dim_; }
  const BloomNetConfig& config() const { return config_; }
  Encoder& rep_encoder() { return *rep_; }
  Encoder* pos_encoder() { return pos_.get(); }
  Encoder* ner_encoder() { return ner_.get(); }
  HwaBranch* hwa() { return hwa_ ? hwa_.get() : nullptr; }
  ClassifierHead& head() { return *head_; }

  void save(const std::string& dir) const override;
  static std::unique_ptr<BloomNetModel> load(const std::string& dir);

 private:
  BloomNetModel(const BloomNetConfig& config, std::shared_ptr<Encoder> rep,
                std::shared_ptr<Encoder> pos, std::shared_ptr<Encoder> ner,
                std::optional<WordVocab> vocab);

  BloomNetConfig config_;
  std::string name_;
  std::shared_ptr<Encoder> rep_;
  std::shared_ptr<Encoder> pos_;  // null when branch disabled
  std::shared_ptr<Encoder> ner_;
  std::unique_ptr<HwaBranch> hwa_;
  long fusion_dim_ = 0;
  std::unique_ptr<ClassifierHead> head_;
};

}  // namespace bloomnet

#endif  // BLOOMNET_MODEL_H_
