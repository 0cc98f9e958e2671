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

#include "bloomnet/baselines.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bloomnet/harness.hpp"

namespace bloomnet {

namespace fs = std::filesystem;
using nn::Matrix;
using nn::Var;

int BaselineSpec::get_int(const std::string& key, int fallback) const {
  auto it = hyperparams.find(key);
  if (it == hyperparams.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ConfigError("baseline " + name + ": hyperparam '" + key + "' is not an integer: " +
                      it->second);
  }
}

double BaselineSpec::get_double(const std::string& key, double fallback) const {
  auto it = hyperparams.find(key);
  if (it == hyperparams.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("baseline " + name + ": hyperparam '" + key + "' is not a number: " +
                      it->second);
  }
}

namespace {

// Per-example logits stacked into a batch loss; shared by every neural
// baseline.
template <typename ForwardFn>
Var batch_loss_impl(nn::Tape& t, std::span<const Example> batch, bool training, Rng* dropout_rng,
                    ForwardFn&& forward) {
  if (batch.empty()) throw DataError("batch_loss: empty batch");
  std::vector<Var> rows;
  std::vector<int> labels;
  rows.reserve(batch.size());
  labels.reserve(batch.size());
  for (const Example& e : batch) {
    rows.push_back(forward(t, e.text, training, dropout_rng));
    labels.push_back(static_cast<int>(e.label));
  }
  return t.cross_entropy_logits(t.stack_rows(rows), labels);
}

void write_manifest(const std::string& dir, const nlohmann::ordered_json& manifest) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw DataError("cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

nlohmann::json read_manifest(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw DataError("missing manifest.json in " + dir);
  return nlohmann::json::parse(in);
}

void write_vocab(const std::string& dir, const WordVocab& vocab) {
  std::ofstream out(fs::path(dir) / "vocab.json");
  out << vocab.to_json() << "\n";
}

WordVocab read_vocab(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "vocab.json");
  if (!in) throw DataError("missing vocab.json in " + dir);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return WordVocab::from_json(text);
}

}  // namespace

TfidfForestClassifier::TfidfForestClassifier(ForestConfig config) : config_(config) {}

void TfidfForestClassifier::fit(const std::vector<Example>& train,
                                const std::vector<Example>& val, const TrainConfig& config,
                                TrainHistory* history) {
  (void)val;  // no early stopping for the forest
  if (train.empty()) throw DataError("tfidf_forest fit: empty training split");
  std::vector<std::string> texts;
  std::vector<int> labels;
  texts.reserve(train.size());
  labels.reserve(train.size());
  for (const Example& e : train) {
    texts.push_back(e.text);
    labels.push_back(static_cast<int>(e.label));
  }
  config_.seed = config.seed;
  Matrix features = vectorizer_.fit_transform(texts);
  forest_.fit(features, labels, kNumLevels, config_);
  if (history) {
    *history = TrainHistory{};
    history->epochs_ran = 1;
    history->best_epoch = 1;
  }
}

ClassDistribution TfidfForestClassifier::predict(const std::string& text) {
  if (!forest_.fitted()) throw DataError("tfidf_forest predict: model not trained");
  std::vector<double> votes = forest_.vote_fractions(vectorizer_.transform_one(text));
  ClassDistribution out;
  int best = 0;
  for (int c = 0; c < kNumLevels; ++c) {
    out.probs[static_cast<size_t>(c)] = votes[static_cast<size_t>(c)];
    if (votes[static_cast<size_t>(c)] > votes[static_cast<size_t>(best)]) best = c;
  }
  out.predicted = static_cast<CognitiveLevel>(best);
  return out;
}

void TfidfForestClassifier::save(const std::string& dir) const {
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["format"] = "bloomnet_forest_v1";
  manifest["name"] = name_;
  manifest["hyperparams"] = {{"n_trees", config_.n_trees},
                             {"max_depth", config_.max_depth},
                             {"min_samples_split", config_.min_samples_split},
                             {"max_features", config_.max_features},
                             {"seed", config_.seed}};
  write_manifest(dir, manifest);

  std::ofstream blob(fs::path(dir) / "model.bin", std::ios::binary);
  if (!blob) throw DataError("cannot write forest blob in " + dir);
  vectorizer_.write(blob);
  forest_.write(blob);
}

std::unique_ptr<TfidfForestClassifier> TfidfForestClassifier::load(const std::string& dir) {
  nlohmann::json manifest = read_manifest(dir);
  ForestConfig config;
  const auto& h = manifest.at("hyperparams");
  config.n_trees = h.value("n_trees", 100);
  config.max_depth = h.value("max_depth", 0);
  config.min_samples_split = h.value("min_samples_split", 2);
  config.max_features = h.value("max_features", 0);
  config.seed = h.value("seed", 42ULL);
  auto model = std::make_unique<TfidfForestClassifier>(config);
  std::ifstream blob(fs::path(dir) / "model.bin", std::ios::binary);
  if (!blob) throw DataError("missing model.bin in " + dir);
  model->vectorizer_ = TfidfVectorizer::read(blob);
  model->forest_ = RandomForestClassifier::read(blob);
  return model;
}

CnnClassifier::CnnClassifier(const Config& config, const WordVocab& vocab)
    : config_(config),
      vocab_(vocab),
      embedding_("cnn.embedding", Matrix()) {
  if (config_.kernel_widths.empty()) throw ConfigError("cnn: no kernel widths");
  Rng rng = Rng(config_.seed).substream("cnn-init");
  embedding_ = nn::Parameter(
      "cnn.embedding",
      nn::normal_init(static_cast<long>(vocab_.size()), config_.embed_dim, 0.1, rng));
  for (long w : config_.kernel_widths) {
    convs_.push_back(std::make_unique<nn::Linear>("cnn.conv" + std::to_string(w),
                                                  w * config_.embed_dim, config_.filters, rng));
  }
  head_ = std::make_unique<nn::Linear>(
      "cnn.head", static_cast<long>(config_.kernel_widths.size()) * config_.filters, kNumLevels,
      rng);
}

Var CnnClassifier::forward_logits(nn::Tape& t, const std::string& text, bool training,
                                  Rng* dropout_rng) {
  WordSequence seq = encode_words(vocab_, text, config_.max_words);
  std::vector<int> ids = seq.word_ids;
  long widest = *std::max_element(config_.kernel_widths.begin(), config_.kernel_widths.end());
  while (static_cast<long>(ids.size()) < widest) ids.push_back(WordVocab::kPad);

  Var embedded = t.embedding_rows(embedding_, ids);
  long len = static_cast<long>(ids.size());
  std::vector<Var> pooled;
  pooled.reserve(convs_.size());
  for (size_t c = 0; c < convs_.size(); ++c) {
    long w = config_.kernel_widths[c];
    std::vector<Var> windows;
    windows.reserve(static_cast<size_t>(len - w + 1));
    for (long i = 0; i + w <= len; ++i) {
      std::vector<Var> span_rows;
      span_rows.reserve(static_cast<size_t>(w));
      for (long k = 0; k < w; ++k) span_rows.push_back(t.row(embedded, i + k));
      windows.push_back(t.concat_cols(span_rows));
    }
    Var activations = t.relu(convs_[c]->forward(t, t.stack_rows(windows)));
    pooled.push_back(t.max_rows(activations));
  }
  Var features = t.concat_cols(pooled);
  if (training && dropout_rng) features = t.dropout(features, config_.dropout, *dropout_rng, true);
  return head_->forward(t, features);
}

ClassDistribution CnnClassifier::predict(const std::string& text) {
  nn::Tape t;
  return ClassDistribution::from_logits(forward_logits(t, text, false, nullptr).value().row(0));
}

Var CnnClassifier::batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                              Rng* dropout_rng) {
  return batch_loss_impl(t, batch, training, dropout_rng,
                         [this](nn::Tape& tape, const std::string& text, bool train, Rng* rng) {
                           return forward_logits(tape, text, train, rng);
                         });
}

std::vector<nn::Parameter*> CnnClassifier::parameters() {
  std::vector<nn::Parameter*> out;
  out.push_back(&embedding_);
  for (auto& c : convs_) c->collect(out);
  head_->collect(out);
  return out;
}

void CnnClassifier::save(const std::string& dir) const {
  nlohmann::ordered_json manifest;
  manifest["format"] = "bloomnet_baseline_v1";
  manifest["family"] = "cnn";
  manifest["name"] = name_;
  manifest["config"] = {{"embed_dim", config_.embed_dim},
                        {"filters", config_.filters},
                        {"kernel_widths", config_.kernel_widths},
                        {"dropout", config_.dropout},
                        {"max_words", config_.max_words},
                        {"seed", config_.seed}};
  write_manifest(dir, manifest);
  write_vocab(dir, vocab_);
  auto* self = const_cast<CnnClassifier*>(this);
  nn::save_parameters((fs::path(dir) / "params.bin").string(), self->parameters());
}

std::unique_ptr<CnnClassifier> CnnClassifier::load(const std::string& dir) {
  nlohmann::json manifest = read_manifest(dir);
  const auto& c = manifest.at("config");
  Config config;
  config.embed_dim = c.at("embed_dim").get<long>();
  config.filters = c.at("filters").get<long>();
  config.kernel_widths = c.at("kernel_widths").get<std::vector<long>>();
  config.dropout = c.at("dropout").get<double>();
  config.max_words = c.at("max_words").get<int>();
  config.seed = c.at("seed").get<uint64_t>();
  auto model = std::make_unique<CnnClassifier>(config, read_vocab(dir));
  nn::load_parameters((fs::path(dir) / "params.bin").string(), model->parameters());
  return model;
}

LstmClassifier::LstmClassifier(const Config& config, const WordVocab& vocab)
    : config_(config),
      vocab_(vocab),
      embedding_("lstm.embedding", Matrix()) {
  if (config_.layers < 1) throw ConfigError("lstm: needs at least one layer");
  Rng rng = Rng(config_.seed).substream("lstm-init");
  embedding_ = nn::Parameter(
      "lstm.embedding",
      nn::normal_init(static_cast<long>(vocab_.size()), config_.embed_dim, 0.1, rng));
  for (long l = 0; l < config_.layers; ++l) {
    long in = (l == 0) ? config_.embed_dim : config_.hidden;
    layers_.push_back(
        std::make_unique<nn::LstmCell>("lstm.l" + std::to_string(l), in, config_.hidden, rng));
  }
  head_ = std::make_unique<nn::Linear>("lstm.head", config_.hidden, kNumLevels, rng);
}

Var LstmClassifier::forward_logits(nn::Tape& t, const std::string& text, bool training,
                                   Rng* dropout_rng) {
  WordSequence seq = encode_words(vocab_, text, config_.max_words);
  Var embedded = t.embedding_rows(embedding_, seq.word_ids);
  long len = static_cast<long>(seq.word_ids.size());

  std::vector<Var> inputs;
  inputs.reserve(static_cast<size_t>(len));
  for (long i = 0; i < len; ++i) inputs.push_back(t.row(embedded, i));

  for (size_t l = 0; l < layers_.size(); ++l) {
    nn::LstmCell::State state{t.constant(Matrix::Zero(1, config_.hidden)),
                              t.constant(Matrix::Zero(1, config_.hidden))};
    std::vector<Var> outputs;
    outputs.reserve(inputs.size());
    for (Var x : inputs) {
      state = layers_[l]->step(t, x, state);
      outputs.push_back(state.h);
    }
    if (training && dropout_rng && l + 1 < layers_.size()) {
      for (Var& h : outputs) h = t.dropout(h, config_.dropout, *dropout_rng, true);
    }
    inputs = std::move(outputs);
  }
  Var last = inputs.back();
  if (training && dropout_rng) last = t.dropout(last, config_.dropout, *dropout_rng, true);
  return head_->forward(t, last);
}

ClassDistribution LstmClassifier::predict(const std::string& text) {
  nn::Tape t;
  return ClassDistribution::from_logits(forward_logits(t, text, false, nullptr).value().row(0));
}

Var LstmClassifier::batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                               Rng* dropout_rng) {
  return batch_loss_impl(t, batch, training, dropout_rng,
                         [this](nn::Tape& tape, const std::string& text, bool train, Rng* rng) {
                           return forward_logits(tape, text, train, rng);
                         });
}

std::vector<nn::Parameter*> LstmClassifier::parameters() {
  std::vector<nn::Parameter*> out;
  out.push_back(&embedding_);
  for (auto& l : layers_) l->collect(out);
  head_->collect(out);
  return out;
}

void LstmClassifier::save(const std::string& dir) const {
  nlohmann::ordered_json manifest;
  manifest["format"] = "bloomnet_baseline_v1";
  manifest["family"] = "lstm";
  manifest["name"] = name_;
  manifest["config"] = {{"embed_dim", config_.embed_dim}, {"hidden", config_.hidden},
                        {"layers", config_.layers},       {"dropout", config_.dropout},
                        {"max_words", config_.max_words}, {"seed", config_.seed}};
  write_manifest(dir, manifest);
  write_vocab(dir, vocab_);
  auto* self = const_cast<LstmClassifier*>(this);
  nn::save_parameters((fs::path(dir) / "params.bin").string(), self->parameters());
}

std::unique_ptr<LstmClassifier> LstmClassifier::load(const std::string& dir) {
  nlohmann::json manifest = read_manifest(dir);
  const auto& c = manifest.at("config");
  Config config;
  config.embed_dim = c.at("embed_dim").get<long>();
  config.hidden = c.at("hidden").get<long>();
  config.layers = c.at("layers").get<long>();
  config.dropout = c.at("dropout").get<double>();
  config.max_words = c.at("max_words").get<int>();
  config.seed = c.at("seed").get<uint64_t>();
  auto model = std::make_unique<LstmClassifier>(config, read_vocab(dir));
  nn::load_parameters((fs::path(dir) / "params.bin").string(), model->parameters());
  return model;
}

SelfAttentionClassifier::SelfAttentionClassifier(const Config& config, const WordVocab& vocab)
    : config_(config),
      vocab_(vocab),
      embedding_("selfattn.embedding", Matrix()) {
  Rng rng = Rng(config_.seed).substream("selfattn-init");
  embedding_ = nn::Parameter(
      "selfattn.embedding",
      nn::normal_init(static_cast<long>(vocab_.size()), config_.embed_dim, 0.1, rng));
  attention_ = std::make_unique<nn::MultiHeadSelfAttention>("selfattn.block", config_.embed_dim,
                                                            config_.heads, rng);
  norm_ = std::make_unique<nn::LayerNorm>("selfattn.norm", config_.embed_dim);
  head_ = std::make_unique<nn::Linear>("selfattn.head", config_.embed_dim, kNumLevels, rng);
}

Var SelfAttentionClassifier::forward_logits(nn::Tape& t, const std::string& text, bool training,
                                            Rng* dropout_rng) {
  WordSequence seq = encode_words(vocab_, text, config_.max_words);
  Var embedded = t.embedding_rows(embedding_, seq.word_ids);
  long len = static_cast<long>(seq.word_ids.size());
  Var attended = attention_->forward(t, embedded, Matrix::Zero(len, len));
  Var block = norm_->forward(t, t.add(embedded, attended));
  Var pooled = t.masked_mean_rows(block, seq.mask);
  if (training && dropout_rng) pooled = t.dropout(pooled, config_.dropout, *dropout_rng, true);
  return head_->forward(t, pooled);
}

ClassDistribution SelfAttentionClassifier::predict(const std::string& text) {
  nn::Tape t;
  return ClassDistribution::from_logits(forward_logits(t, text, false, nullptr).value().row(0));
}

Var SelfAttentionClassifier::batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                                        Rng* dropout_rng) {
  return batch_loss_impl(t, batch, training, dropout_rng,
                         [this](nn::Tape& tape, const std::string& text, bool train, Rng* rng) {
                           return forward_logits(tape, text, train, rng);
                         });
}

std::vector<nn::Parameter*> SelfAttentionClassifier::parameters() {
  std::vector<nn::Parameter*> out;
  out.push_back(&embedding_);
  attention_->collect(out);
  norm_->collect(out);
  head_->collect(out);
  return out;
}

void SelfAttentionClassifier::save(const std::string& dir) const {
  nlohmann::ordered_json manifest;
  manifest["format"] = "bloomnet_baseline_v1";
  manifest["family"] = "self_attention";
  manifest["name"] = name_;
  manifest["config"] = {{"embed_dim", config_.embed_dim},
                        {"heads", config_.heads},
                        {"dropout", config_.dropout},
                        {"max_words", config_.max_words},
                        {"seed", config_.seed}};
  write_manifest(dir, manifest);
  write_vocab(dir, vocab_);
  auto* self = const_cast<SelfAttentionClassifier*>(this);
  nn::save_parameters((fs::path(dir) / "params.bin").string(), self->parameters());
}

std::unique_ptr<SelfAttentionClassifier> SelfAttentionClassifier::load(const std::string& dir) {
  nlohmann::json manifest = read_manifest(dir);
  const auto& c = manifest.at("config");
  Config config;
  config.embed_dim = c.at("embed_dim").get<long>();
  config.heads = c.at("heads").get<long>();
  config.dropout = c.at("dropout").get<double>();
  config.max_words = c.at("max_words").get<int>();
  config.seed = c.at("seed").get<uint64_t>();
  auto model = std::make_unique<SelfAttentionClassifier>(config, read_vocab(dir));
  nn::load_parameters((fs::path(dir) / "params.bin").string(), model->parameters());
  return model;
}

std::unique_ptr<BloomNetModel> make_bloomnet_variant(const BloomNetConfig& config,
                                                     const std::vector<std::string>& vocab_texts,
                                                     bool use_hwa, bool use_pos_ner) {
  BloomNetConfig variant = config;
  variant.use_hwa = use_hwa;
  variant.use_pos = use_pos_ner;
  variant.use_ner = use_pos_ner;
  return std::make_unique<BloomNetModel>(variant, vocab_texts);
}

std::unique_ptr<BloomNetModel> make_encoder_finetune(const EncoderConfig& rep, uint64_t seed) {
  BloomNetConfig config;
  config.rep = rep;
  config.seed = seed;
  config.name = "encoder_finetune";
  return make_bloomnet_variant(config, {}, false, false);
}

namespace {

struct RegistryEntry {
  const char* name;
  BaselineFamily family;
  bool implemented;
};

constexpr RegistryEntry kRegistry[] = {
    {"tfidf_forest", BaselineFamily::kTfidfForest, true},
    {"cnn", BaselineFamily::kCnn, true},
    {"lstm", BaselineFamily::kLstm, true},
    {"self_attention", BaselineFamily::kSelfAttention, true},
    {"encoder_finetune", BaselineFamily::kEncoderFinetune, true},
    // Reserved for parity with the full comparison set; not shipped.
    {"vdcnn", BaselineFamily::kCnn, false},
    {"han", BaselineFamily::kSelfAttention, false},
    {"rcnn", BaselineFamily::kCnn, false},
    {"seq2seq_attention", BaselineFamily::kSelfAttention, false},
};

std::string joined_implemented() {
  std::string out;
  for (const RegistryEntry& e : kRegistry) {
    if (!e.implemented) continue;
    if (!out.empty()) out += ", ";
    out += e.name;
  }
  return out;
}

}  // namespace

std::vector<std::string> BaselineRegistry::names() {
  std::vector<std::string> out;
  for (const RegistryEntry& e : kRegistry) out.emplace_back(e.name);
  return out;
}

std::vector<std::string> BaselineRegistry::implemented_names() {
  std::vector<std::string> out;
  for (const RegistryEntry& e : kRegistry) {
    if (e.implemented) out.emplace_back(e.name);
  }
  return out;
}

bool BaselineRegistry::is_registered(const std::string& name) {
  for (const RegistryEntry& e : kRegistry) {
    if (name == e.name) return true;
  }
  return false;
}

bool BaselineRegistry::is_reserved(const std::string& name) {
  for (const RegistryEntry& e : kRegistry) {
    if (name == e.name) return !e.implemented;
  }
  return false;
}

BaselineSpec BaselineRegistry::default_spec(const std::string& name) {
  for (const RegistryEntry& e : kRegistry) {
    if (name == e.name) {
      BaselineSpec spec;
      spec.name = name;
      spec.family = e.family;
      return spec;
    }
  }
  throw ConfigError("unknown baseline '" + name + "'; registry keys: " + joined_implemented());
}

std::unique_ptr<TextClassifier> BaselineRegistry::build(const BaselineSpec& spec,
                                                        const BaselineBuildContext& context) {
  if (is_reserved(spec.name)) {
    throw NotImplementedError("baseline '" + spec.name +
                              "' is reserved but not implemented; available: " +
                              joined_implemented());
  }
  if (!is_registered(spec.name)) {
    throw ConfigError("unknown baseline '" + spec.name + "'; registry keys: " +
                      joined_implemented());
  }
  switch (spec.family) {
    case BaselineFamily::kTfidfForest: {
      ForestConfig config;
      config.n_trees = spec.get_int("trees", config.n_trees);
      config.max_depth = spec.get_int("max_depth", config.max_depth);
      config.max_features = spec.get_int("max_features", config.max_features);
      config.seed = context.seed;
      return std::make_unique<TfidfForestClassifier>(config);
    }
    case BaselineFamily::kCnn: {
      CnnClassifier::Config config;
      config.embed_dim = spec.get_int("embed_dim", static_cast<int>(config.embed_dim));
      config.filters = spec.get_int("filters", static_cast<int>(config.filters));
      config.dropout = spec.get_double("dropout", config.dropout);
      config.max_words = spec.get_int("max_words", config.max_words);
      config.seed = context.seed;
      return std::make_unique<CnnClassifier>(config, WordVocab::build(context.vocab_texts));
    }
    case BaselineFamily::kLstm: {
      LstmClassifier::Config config;
      config.embed_dim = spec.get_int("embed_dim", static_cast<int>(config.embed_dim));
      config.hidden = spec.get_int("hidden", static_cast<int>(config.hidden));
      config.layers = spec.get_int("layers", static_cast<int>(config.layers));
      config.dropout = spec.get_double("dropout", config.dropout);
      config.max_words = spec.get_int("max_words", config.max_words);
      config.seed = context.seed;
      return std::make_unique<LstmClassifier>(config, WordVocab::build(context.vocab_texts));
    }
    case BaselineFamily::kSelfAttention: {
      SelfAttentionClassifier::Config config;
      config.embed_dim = spec.get_int("embed_dim", static_cast<int>(config.embed_dim));
      config.heads = spec.get_int("heads", static_cast<int>(config.heads));
      config.dropout = spec.get_double("dropout", config.dropout);
      config.max_words = spec.get_int("max_words", config.max_words);
      config.seed = context.seed;
      return std::make_unique<SelfAttentionClassifier>(config,
                                                       WordVocab::build(context.vocab_texts));
    }
    case BaselineFamily::kEncoderFinetune:
      return make_encoder_finetune(context.rep_encoder, context.seed);
  }
  throw ConfigError("invalid baseline family");
}

std::unique_ptr<TextClassifier> load_classifier(const std::string& dir) {
  nlohmann::json manifest = read_manifest(dir);
  std::string format = manifest.value("format", "");
  if (format == "bloomnet_model_v1") return BloomNetModel::load(dir);
  if (format == "bloomnet_forest_v1") return TfidfForestClassifier::load(dir);
  if (format == "bloomnet_baseline_v1") {
    std::string family = manifest.value("family", "");
    if (family == "cnn") return CnnClassifier::load(dir);
    if (family == "lstm") return LstmClassifier::load(dir);
    if (family == "self_attention") return SelfAttentionClassifier::load(dir);
    throw DataError("checkpoint " + dir + ": unknown baseline family '" + family + "'");
  }
  throw DataError("checkpoint " + dir + ": unrecognized manifest format '" + format + "'");
}

}  // namespace bloomnet
