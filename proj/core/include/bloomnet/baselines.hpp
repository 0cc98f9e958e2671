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

#ifndef BLOOMNET_BASELINES_H_
#define BLOOMNET_BASELINES_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bloomnet/forest.hpp"
#include "bloomnet/model.hpp"
#include "bloomnet/tfidf.hpp"

namespace bloomnet {

enum class BaselineFamily { kTfidfForest, kCnn, kLstm, kSelfAttention, kEncoderFinetune };

struct BaselineSpec {
  std::string name;
  BaselineFamily family = BaselineFamily::kTfidfForest;
  std::map<std::string, std::string> hyperparams;

  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
};

// tf-idf features + random forest behind the shared classifier contract.
class TfidfForestClassifier : public TextClassifier {
 public:
  explicit TfidfForestClassifier(ForestConfig config = {});

  const std::string& name() const override { return name_; }
  ClassDistribution predict(const std::string& text) override;
  void fit(const std::vector<Example>& train, const std::vector<Example>& val,
           const TrainConfig& config, TrainHistory* history = nullptr) override;
  void save(const std::string& dir) const override;
  static std::unique_ptr<TfidfForestClassifier> load(const std::string& dir);

  const TfidfVectorizer& vectorizer() const { return vectorizer_; }
  const RandomForestClassifier& forest() const { return forest_; }

 private:
  std::string name_ = "tfidf_forest";
  ForestConfig config_;
  TfidfVectorizer vectorizer_;
  RandomForestClassifier forest_;
};

// Word-embedding classifier over parallel convolution widths with
// max-over-time pooling. Inputs shorter than the widest kernel are padded.
class CnnClassifier : public NeuralTextClassifier {
 public:
  struct Config {
    long embed_dim = 300;
    long filters = 100;  // per kernel width
    std::vector<long> kernel_widths = {3, 4, 5};
    double dropout = 0.10;
    int max_words = 128;
    uint64_t seed = 42;
  };
  CnnClassifier(const Config& config, const WordVocab& vocab);

  const std::string& name() const override { return name_; }
  ClassDistribution predict(const std::string& text) override;
  nn::Var batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                     Rng* dropout_rng) override;
  std::vector<nn::Parameter*> parameters() override;
  void save(const std::string& dir) const override;
  static std::unique_ptr<CnnClassifier> load(const std::string& dir);

 private:
  nn::Var forward_logits(nn::Tape& t, const std::string& text, bool training, Rng* dropout_rng);

  std::string name_ = "cnn";
  Config config_;
  WordVocab vocab_;
  nn::Parameter embedding_;
  std::vector<std::unique_ptr<nn::Linear>> convs_;  // one per kernel width
  std::unique_ptr<nn::Linear> head_;
};

// Stacked unidirectional LSTM; the final real position's top state feeds the
// softmax head.
class LstmClassifier : public NeuralTextClassifier {
 public:
  struct Config {
    long embed_dim = 300;
    long hidden = 768;
    long layers = 4;
    double dropout = 0.10;
    int max_words = 128;
    uint64_t seed = 42;
  };
  LstmClassifier(const Config& config, const WordVocab& vocab);

  const std::string& name() const override { return name_; }
  ClassDistribution predict(const std::string& text) override;
  nn::Var batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                     Rng* dropout_rng) override;
  std::vector<nn::Parameter*> parameters() override;
  void save(const std::string& dir) const override;
  static std::unique_ptr<LstmClassifier> load(const std::string& dir);

 private:
  nn::Var forward_logits(nn::Tape& t, const std::string& text, bool training, Rng* dropout_rng);

  std::string name_ = "lstm";
  Config config_;
  WordVocab vocab_;
  nn::Parameter embedding_;
  std::vector<std::unique_ptr<nn::LstmCell>> layers_;
  std::unique_ptr<nn::Linear> head_;
};

// One multi-head self-attention block over word embeddings, mean-pooled.
class SelfAttentionClassifier : public NeuralTextClassifier {
 public:
  struct Config {
    long embed_dim = 768;
    long heads = 8;
    double dropout = 0.10;
    int max_words = 128;
    uint64_t seed = 42;
  };
  SelfAttentionClassifier(const Config& config, const WordVocab& vocab);

  const std::string& name() const override { return name_; }
  ClassDistribution predict(const std::string& text) override;
  nn::Var batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                     Rng* dropout_rng) override;
  std::vector<nn::Parameter*> parameters() override;
  void save(const std::string& dir) const override;
  static std::unique_ptr<SelfAttentionClassifier> load(const std::string& dir);

 private:
  nn::Var forward_logits(nn::Tape& t, const std::string& text, bool training, Rng* dropout_rng);

  std::string name_ = "self_attention";
  Config config_;
  WordVocab vocab_;
  nn::Parameter embedding_;
  std::unique_ptr<nn::MultiHeadSelfAttention> attention_;
  std::unique_ptr<nn::LayerNorm> norm_;
  std::unique_ptr<nn::Linear> head_;
};

// Pretrained encoder + linear head: exactly the "base" ablation variant of
// the fusion model, built through the same factory path.
std::unique_ptr<BloomNetModel> make_encoder_finetune(const EncoderConfig& rep, uint64_t seed);

// The fusion model restricted to a branch subset; shared by the ablation
// grid and the encoder fine-tune baseline so the two stay equivalent.
std::unique_ptr<BloomNetModel> make_bloomnet_variant(const BloomNetConfig& config,
                                                     const std::vector<std::string>& vocab_texts,
                                                     bool use_hwa, bool use_pos_ner);

struct BaselineBuildContext {
  std::vector<std::string> vocab_texts;  // corpus for the word vocabulary
  EncoderConfig rep_encoder;             // for the encoder fine-tune family
  uint64_t seed = 42;
};

class BaselineRegistry {
 public:
  // Registry keys in presentation order; reserved names are listed but not
  // buildable.
  static std::vector<std::string> names();
  static std::vector<std::string> implemented_names();
  static bool is_registered(const std::string& name);
  static bool is_reserved(const std::string& name);
  static BaselineSpec default_spec(const std::string& name);
  static std::unique_ptr<TextClassifier> build(const BaselineSpec& spec,
                                               const BaselineBuildContext& context);
};

// Load any saved classifier checkpoint (fusion model, neural baseline, or
// forest) by its manifest.
std::unique_ptr<TextClassifier> load_classifier(const std::string& dir);

}  // namespace bloomnet

#endif  // BLOOMNET_BASELINES_H_
