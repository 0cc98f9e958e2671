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

#include "bloomnet/model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bloomnet/harness.hpp"

namespace bloomnet {

namespace fs = std::filesystem;
using nn::Matrix;
using nn::Var;

ClassDistribution ClassDistribution::from_logits(const nn::RowVector& logits) {
  if (logits.size() != kNumLevels) {
    throw ShapeError("class distribution needs " + std::to_string(kNumLevels) + " logits, got " +
                     std::to_string(logits.size()));
  }
  if (!logits.allFinite()) throw NumericError("class distribution: non-finite logits");
  nn::RowVector p = nn::softmax_stable(logits);
  ClassDistribution out;
  int best = 0;
  for (int i = 0; i < kNumLevels; ++i) {
    out.probs[static_cast<size_t>(i)] = p(i);
    if (p(i) > p(best)) best = i;  // strict: ties keep the lowest ordinal
  }
  out.predicted = static_cast<CognitiveLevel>(best);
  return out;
}

void ClassDistribution::validate(double tol) const {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw NumericError("class distribution: prob outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw NumericError("class distribution: probs sum to " + std::to_string(sum));
  }
  int best = 0;
  for (int i = 1; i < kNumLevels; ++i) {
    if (probs[static_cast<size_t>(i)] > probs[static_cast<size_t>(best)]) best = i;
  }
  if (best != static_cast<int>(predicted)) {
    throw NumericError("class distribution: predicted label is not the argmax");
  }
}

nn::RowVector FusedRepresentation::segment(Branch branch) const {
  long offset = 0;
  for (int b = 0; b < static_cast<int>(branch_dims.size()); ++b) {
    long d = branch_dims[static_cast<size_t>(b)];
    if (b == static_cast<int>(branch)) {
      if (d == 0) throw ShapeError("fused representation has no " + branch_name(branch) + " segment");
      return vector.segment(offset, d);
    }
    offset += d;
  }
  throw ShapeError("invalid branch");
}

FusedRepresentation fuse(const std::vector<PooledRepresentation>& parts) {
  if (parts.empty()) throw ShapeError("fuse: no branch representations");
  int last = -1;
  bool has_rep = false;
  long total = 0;
  for (const PooledRepresentation& p : parts) {
    int tag = static_cast<int>(p.branch);
    if (tag <= last) {
      throw ShapeError("fuse: branch mismatch; expected canonical order rep|pos|ner|hwa");
    }
    last = tag;
    if (p.branch == Branch::kRep) has_rep = true;
    if (p.dim() <= 0) throw ShapeError("fuse: empty " + branch_name(p.branch) + " vector");
    if (!p.vector.allFinite()) {
      throw NumericError("fuse: non-finite " + branch_name(p.branch) + " vector");
    }
    total += p.dim();
  }
  if (!has_rep) throw ShapeError("fuse: representation branch is required");

  FusedRepresentation fused;
  fused.vector.resize(total);
  long offset = 0;
  for (const PooledRepresentation& p : parts) {
    fused.vector.segment(offset, p.dim()) = p.vector;
    fused.branch_dims[static_cast<size_t>(p.branch)] = p.dim();
    offset += p.dim();
  }
  return fused;
}

FusedRepresentation fuse(const PooledRepresentation& rep, const PooledRepresentation& pos,
                         const PooledRepresentation& ner, const PooledRepresentation& hwa) {
  return fuse(std::vector<PooledRepresentation>{rep, pos, ner, hwa});
}

ClassifierHead::ClassifierHead(long input_dim, Rng& rng)
    : weight_("head.weight", nn::xavier_uniform(kNumLevels, input_dim, rng)),
      bias_("head.bias", Matrix::Zero(1, kNumLevels)) {}

Var ClassifierHead::forward(nn::Tape& t, Var fused) {
  if (fused.cols() != weight_.value.cols()) {
    throw ShapeError("classifier head expects fusion width " +
                     std::to_string(weight_.value.cols()) + ", got " +
                     std::to_string(fused.cols()));
  }
  return t.add_row_broadcast(t.matmul(fused, t.transpose(t.param(weight_))), t.param(bias_));
}

void ClassifierHead::collect(std::vector<nn::Parameter*>& out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

ClassDistribution classify(const FusedRepresentation& fused, const ClassifierHead& head) {
  if (head.weight().value.cols() != fused.dim()) {
    throw ShapeError("classify: head width " + std::to_string(head.weight().value.cols()) +
                     " != fused dimension " + std::to_string(fused.dim()));
  }
  nn::RowVector logits =
      (head.weight().value * fused.vector.transpose()).transpose() + head.bias().value.row(0);
  return ClassDistribution::from_logits(logits);
}

double nll_from_logits(const nn::RowVector& logits, CognitiveLevel gold) {
  if (!logits.allFinite()) throw NumericError("nll_from_logits: non-finite logits");
  double m = logits.maxCoeff();
  double sum = 0.0;
  for (long i = 0; i < logits.size(); ++i) sum += std::exp(logits(i) - m);
  return m + std::log(sum) - logits(static_cast<int>(gold));
}

std::vector<nn::Parameter*> NeuralTextClassifier::trainable_parameters() {
  std::vector<nn::Parameter*> out;
  for (nn::Parameter* p : parameters()) {
    if (p->trainable) out.push_back(p);
  }
  return out;
}

void NeuralTextClassifier::fit(const std::vector<Example>& train, const std::vector<Example>& val,
                               const TrainConfig& config, TrainHistory* history) {
  TrainHistory h = train_model(*this, train, val, config);
  if (history) *history = std::move(h);
}

uint64_t NeuralTextClassifier::parameter_checksum() { return nn::checksum(parameters()); }

std::string variant_name(bool use_hwa, bool use_pos_ner) {
  if (use_hwa && use_pos_ner) return "+WA+POS-NER";
  if (use_hwa) return "+WA";
  if (use_pos_ner) return "+POS-NER";
  return "base";
}

void BloomNetConfig::validate() const {
  if (rep.role != EncoderRole::kRepresentation) {
    throw ConfigError("bloomnet: rep encoder must have the representation role");
  }
  rep.validate();
  if (use_pos) {
    if (pos.role != EncoderRole::kPos) throw ConfigError("bloomnet: pos encoder role mismatch");
    pos.validate();
  }
  if (use_ner) {
    if (ner.role != EncoderRole::kNer) throw ConfigError("bloomnet: ner encoder role mismatch");
    ner.validate();
  }
  if (use_hwa) hwa.validate();
  if (fusion_dropout < 0.0 || fusion_dropout >= 1.0) {
    throw ConfigError("bloomnet: fusion_dropout must be in [0,1)");
  }
}

BloomNetModel::BloomNetModel(const BloomNetConfig& config,
                             const std::vector<std::string>& vocab_texts)
    : BloomNetModel(config, Encoder::load(config.rep),
                    config.use_pos ? Encoder::load(config.pos) : nullptr,
                    config.use_ner ? Encoder::load(config.ner) : nullptr,
                    config.use_hwa ? std::optional<WordVocab>(WordVocab::build(vocab_texts))
                                   : std::nullopt) {}

BloomNetModel::BloomNetModel(const BloomNetConfig& config, std::shared_ptr<Encoder> rep,
                             std::shared_ptr<Encoder> pos, std::shared_ptr<Encoder> ner,
                             std::optional<WordVocab> vocab)
    : config_(config), rep_(std::move(rep)), pos_(std::move(pos)), ner_(std::move(ner)) {
  config_.validate();
  name_ = config_.name.empty() ? variant_name(config_.use_hwa, config_.use_pos && config_.use_ner)
                               : config_.name;
  if (config_.use_hwa) {
    if (!vocab) throw ConfigError("bloomnet: HWA branch enabled but no word vocabulary");
    Rng hwa_rng = Rng(config_.seed).substream("hwa-init");
    hwa_ = std::make_unique<HwaBranch>(config_.hwa, *vocab, hwa_rng);
  }
  fusion_dim_ = rep_->hidden_dim();
  if (config_.use_pos) fusion_dim_ += pos_->hidden_dim();
  if (config_.use_ner) fusion_dim_ += ner_->hidden_dim();
  if (config_.use_hwa) fusion_dim_ += hwa_->output_dim();
  Rng head_rng = Rng(config_.seed).substream("head-init");
  head_ = std::make_unique<ClassifierHead>(fusion_dim_, head_rng);
  if (head_->input_dim() != fusion_dim_) {
    throw ShapeError("bloomnet: classifier head width " + std::to_string(head_->input_dim()) +
                     " != fusion width " + std::to_string(fusion_dim_));
  }
  if (config_.use_pos && !pos_->frozen()) throw ConfigError("bloomnet: pos encoder must be frozen");
  if (config_.use_ner && !ner_->frozen()) throw ConfigError("bloomnet: ner encoder must be frozen");
}

Var BloomNetModel::forward_logits(nn::Tape& t, const std::string& text, bool training,
                                  Rng* dropout_rng) {
  std::vector<Var> parts;
  parts.push_back(rep_->encode(t, rep_->tokenize(text), training, dropout_rng));
  if (config_.use_pos) parts.push_back(pos_->encode(t, pos_->tokenize(text)));
  if (config_.use_ner) parts.push_back(ner_->encode(t, ner_->tokenize(text)));
  if (config_.use_hwa) parts.push_back(hwa_->forward(t, hwa_->encode(text)));
  Var fused = parts.size() == 1 ? parts[0] : t.concat_cols(parts);
  if (training && dropout_rng && config_.fusion_dropout > 0.0) {
    fused = t.dropout(fused, config_.fusion_dropout, *dropout_rng, true);
  }
  return head_->forward(t, fused);
}

ClassDistribution BloomNetModel::predict(const std::string& text) {
  nn::Tape t;
  Var logits = forward_logits(t, text, false, nullptr);
  return ClassDistribution::from_logits(logits.value().row(0));
}

Var BloomNetModel::batch_loss(nn::Tape& t, std::span<const Example> batch, bool training,
                              Rng* dropout_rng) {
  if (batch.empty()) throw DataError("batch_loss: empty batch");
  std::vector<Var> logit_rows;
  std::vector<int> labels;
  logit_rows.reserve(batch.size());
  labels.reserve(batch.size());
  for (const Example& e : batch) {
    logit_rows.push_back(forward_logits(t, e.text, training, dropout_rng));
    labels.push_back(static_cast<int>(e.label));
  }
  return t.cross_entropy_logits(t.stack_rows(logit_rows), labels);
}

std::vector<PooledRepresentation> BloomNetModel::branch_representations(const std::string& text) {
  std::vector<PooledRepresentation> parts;
  parts.push_back(rep_->encode_pooled(text));
  if (config_.use_pos) parts.push_back(pos_->encode_pooled(text));
  if (config_.use_ner) parts.push_back(ner_->encode_pooled(text));
  if (config_.use_hwa) parts.push_back(hwa_->forward_pooled(text));
  return parts;
}

std::vector<nn::Parameter*> BloomNetModel::parameters() {
  std::vector<nn::Parameter*> out;
  for (nn::Parameter* p : rep_->parameters()) out.push_back(p);
  if (config_.use_pos) {
    for (nn::Parameter* p : pos_->parameters()) out.push_back(p);
  }
  if (config_.use_ner) {
    for (nn::Parameter* p : ner_->parameters()) out.push_back(p);
  }
  if (config_.use_hwa) {
    for (nn::Parameter* p : hwa_->parameters()) out.push_back(p);
  }
  head_->collect(out);
  return out;
}

void BloomNetModel::save(const std::string& dir) const {
  fs::create_directories(dir);
  auto* self = const_cast<BloomNetModel*>(this);

  nlohmann::ordered_json manifest;
  manifest["format"] = "bloomnet_model_v1";
  manifest["model"] = "bloomnet";
  manifest["name"] = name_;
  manifest["seed"] = config_.seed;
  manifest["fusion_dropout"] = config_.fusion_dropout;
  manifest["fusion_dim"] = fusion_dim_;
  manifest["label_order"] = nlohmann::json::array();
  for (int i = 0; i < kNumLevels; ++i) manifest["label_order"].push_back(level_name(i));
  manifest["branches"] = {{"rep", true},
                          {"pos", config_.use_pos},
                          {"ner", config_.use_ner},
                          {"hwa", config_.use_hwa}};

  auto encoder_info = [](const Encoder& e) {
    nlohmann::ordered_json j;
    j["checkpoint_id"] = e.checkpoint_id();
    j["hidden"] = e.hidden_dim();
    j["max_len"] = e.max_len();
    j["pooling"] = e.pooling() == PoolingMode::kCls ? "cls" : "mean";
    return j;
  };
  manifest["encoders"]["rep"] = encoder_info(*rep_);
  rep_->save((fs::path(dir) / "rep_encoder").string());
  if (config_.use_pos) {
    manifest["encoders"]["pos"] = encoder_info(*pos_);
    pos_->save((fs::path(dir) / "pos_encoder").string());
  }
  if (config_.use_ner) {
    manifest["encoders"]["ner"] = encoder_info(*ner_);
    ner_->save((fs::path(dir) / "ner_encoder").string());
  }
  if (config_.use_hwa) {
    manifest["hwa"] = {{"embed_dim", config_.hwa.embed_dim},
                       {"recurrent_hidden", config_.hwa.recurrent_hidden},
                       {"attention_dim", config_.hwa.attention_dim},
                       {"layers", config_.hwa.layers},
                       {"max_words", config_.hwa.max_words}};
    std::ofstream vocab_out(fs::path(dir) / "hwa_vocab.json");
    vocab_out << self->hwa_->vocab().to_json() << "\n";
    nn::save_parameters((fs::path(dir) / "hwa.bin").string(), self->hwa_->parameters());
  }
  std::vector<nn::Parameter*> head_params;
  self->head_->collect(head_params);
  nn::save_parameters((fs::path(dir) / "head.bin").string(), head_params);

  std::ofstream out(fs::path(dir) / "manifest.json");
  out << manifest.dump(2) << "\n";
}

std::unique_ptr<BloomNetModel> BloomNetModel::load(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw DataError("model checkpoint: missing manifest.json in " + dir);
  nlohmann::json manifest = nlohmann::json::parse(in);
  if (manifest.value("format", "") != std::string("bloomnet_model_v1")) {
    throw DataError("model checkpoint: unsupported manifest format in " + dir);
  }

  BloomNetConfig config;
  config.seed = manifest.value("seed", 42ULL);
  config.fusion_dropout = manifest.value("fusion_dropout", 0.0);
  config.name = manifest.value("name", "");
  config.use_pos = manifest["branches"].value("pos", false);
  config.use_ner = manifest["branches"].value("ner", false);
  config.use_hwa = manifest["branches"].value("hwa", false);

  auto enc_config = [&](const char* key, EncoderRole role, const char* subdir) {
    int max_len = manifest["encoders"][key].value("max_len", 128);
    return EncoderConfig::for_role(role, (fs::path(dir) / subdir).string(), max_len);
  };
  config.rep = enc_config("rep", EncoderRole::kRepresentation, "rep_encoder");
  std::shared_ptr<Encoder> rep = Encoder::load(config.rep);
  std::shared_ptr<Encoder> pos;
  std::shared_ptr<Encoder> ner;
  if (config.use_pos) {
    config.pos = enc_config("pos", EncoderRole::kPos, "pos_encoder");
    pos = Encoder::load(config.pos);
  }
  if (config.use_ner) {
    config.ner = enc_config("ner", EncoderRole::kNer, "ner_encoder");
    ner = Encoder::load(config.ner);
  }

  std::optional<WordVocab> vocab;
  if (config.use_hwa) {
    const auto& h = manifest.at("hwa");
    config.hwa.embed_dim = h.at("embed_dim").get<long>();
    config.hwa.recurrent_hidden = h.at("recurrent_hidden").get<long>();
    config.hwa.attention_dim = h.at("attention_dim").get<long>();
    config.hwa.layers = h.at("layers").get<long>();
    config.hwa.max_words = h.at("max_words").get<int>();
    std::ifstream vocab_in(fs::path(dir) / "hwa_vocab.json");
    if (!vocab_in) throw DataError("model checkpoint: missing hwa_vocab.json in " + dir);
    std::string vocab_text((std::istreambuf_iterator<char>(vocab_in)),
                           std::istreambuf_iterator<char>());
    vocab = WordVocab::from_json(vocab_text);
  }

  auto model = std::unique_ptr<BloomNetModel>(
      new BloomNetModel(config, std::move(rep), std::move(pos), std::move(ner), std::move(vocab)));
  if (config.use_hwa) {
    nn::load_parameters((fs::path(dir) / "hwa.bin").string(), model->hwa_->parameters());
  }
  std::vector<nn::Parameter*> head_params;
  model->head_->collect(head_params);
  nn::load_parameters((fs::path(dir) / "head.bin").string(), head_params);
  return model;
}

}  // namespace bloomnet
