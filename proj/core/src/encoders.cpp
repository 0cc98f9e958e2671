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

#include "bloomnet/encoders.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace bloomnet {

namespace fs = std::filesystem;
using nn::Matrix;

std::string role_name(EncoderRole role) {
  switch (role) {
    case EncoderRole::kRepresentation:
      return "representation";
    case EncoderRole::kPos:
      return "pos";
    case EncoderRole::kNer:
      return "ner";
  }
  throw ConfigError("invalid encoder role");
}

std::string branch_name(Branch branch) {
  switch (branch) {
    case Branch::kRep:
      return "rep";
    case Branch::kPos:
      return "pos";
    case Branch::kNer:
      return "ner";
    case Branch::kHwa:
      return "hwa";
  }
  throw ConfigError("invalid branch");
}

Branch role_branch(EncoderRole role) {
  switch (role) {
    case EncoderRole::kRepresentation:
      return Branch::kRep;
    case EncoderRole::kPos:
      return Branch::kPos;
    case EncoderRole::kNer:
      return Branch::kNer;
  }
  throw ConfigError("invalid encoder role");
}

EncoderConfig EncoderConfig::for_role(EncoderRole role, std::string pretrained_id, int max_len) {
  EncoderConfig c;
  c.role = role;
  c.pretrained_id = std::move(pretrained_id);
  c.max_len = max_len;
  c.frozen = (role != EncoderRole::kRepresentation);
  return c;
}

void EncoderConfig::validate() const {
  if (pretrained_id.empty()) throw ConfigError("encoder config: pretrained_id is empty");
  if (max_len < 3) throw ConfigError("encoder config: max_len must fit markers plus a token");
  bool must_freeze = (role != EncoderRole::kRepresentation);
  if (frozen != must_freeze) {
    throw ConfigError("encoder config: role '" + role_name(role) + "' must " +
                      (must_freeze ? "be frozen" : "stay trainable"));
  }
}

int TokenizedInput::length() const {
  int n = 0;
  for (int m : mask) n += (m != 0);
  return n;
}

void TokenizedInput::validate(int max_len) const {
  if (token_ids.size() != mask.size()) {
    throw ShapeError("tokenized input: token_ids and mask lengths differ");
  }
  if (token_ids.empty()) throw ShapeError("tokenized input: empty sequence");
  if (static_cast<int>(token_ids.size()) > max_len) {
    throw ShapeError("tokenized input: length " + std::to_string(token_ids.size()) +
                     " exceeds max_len " + std::to_string(max_len));
  }
  for (int m : mask) {
    if (m != 0 && m != 1) throw ShapeError("tokenized input: mask entries must be 0/1");
  }
}

namespace {

std::string pooling_name(PoolingMode mode) {
  return mode == PoolingMode::kCls ? "cls" : "mean";
}

PoolingMode parse_pooling(const std::string& s) {
  if (s == "cls") return PoolingMode::kCls;
  if (s == "mean") return PoolingMode::kMean;
  throw ConfigError("unknown pooling mode: " + s);
}

const std::array<const char*, kNumSpecialTokens> kSpecialTokens = {"<pad>", "<cls>", "<sep>",
                                                                   "<unk>"};

std::vector<std::string> build_vocab(const std::vector<std::string>& words) {
  std::vector<std::string> vocab;
  vocab.reserve(words.size() + kNumSpecialTokens);
  for (const char* s : kSpecialTokens) vocab.emplace_back(s);
  std::unordered_set<std::string> seen(vocab.begin(), vocab.end());
  for (const std::string& w : words) {
    std::string token = to_lower(trim(w));
    if (token.empty()) continue;
    if (seen.insert(token).second) vocab.push_back(std::move(token));
  }
  return vocab;
}

}  // namespace

Encoder::Encoder(TransformerSpec spec, std::vector<std::string> vocab, EncoderRole role,
                 int max_len, uint64_t init_seed)
    : spec_(spec),
      role_(role),
      max_len_(max_len),
      vocab_(std::move(vocab)),
      tok_embed_("enc.tok_embed", Matrix()),
      pos_embed_("enc.pos_embed", Matrix()),
      emb_ln_("enc.emb_ln", spec.hidden) {
  if (spec_.hidden <= 0 || spec_.layers < 0 || spec_.heads <= 0 || spec_.intermediate <= 0) {
    throw ConfigError("encoder spec: dimensions must be positive");
  }
  if (spec_.hidden % spec_.heads != 0) {
    throw ConfigError("encoder spec: hidden not divisible by heads");
  }
  if (max_len_ > spec_.max_positions) {
    throw ConfigError("encoder: max_len " + std::to_string(max_len_) +
                      " exceeds checkpoint positions " + std::to_string(spec_.max_positions));
  }
  for (size_t i = 0; i < vocab_.size(); ++i) vocab_index_[vocab_[i]] = static_cast<int>(i);

  Rng rng = Rng(init_seed).substream("encoder-init");
  tok_embed_ =
      nn::Parameter("enc.tok_embed",
                    nn::normal_init(static_cast<long>(vocab_.size()), spec_.hidden, 0.02, rng));
  pos_embed_ = nn::Parameter("enc.pos_embed",
                             nn::normal_init(spec_.max_positions, spec_.hidden, 0.02, rng));
  for (long l = 0; l < spec_.layers; ++l) {
    layers_.push_back(std::make_unique<nn::TransformerLayer>(
        "enc.layer" + std::to_string(l), spec_.hidden, spec_.heads, spec_.intermediate, rng));
  }
}

std::shared_ptr<Encoder> Encoder::create_random(const TransformerSpec& spec,
                                                const std::vector<std::string>& vocab_words,
                                                uint64_t seed, EncoderRole role, int max_len) {
  auto enc = std::shared_ptr<Encoder>(
      new Encoder(spec, build_vocab(vocab_words), role, max_len, seed));
  enc->checkpoint_id_ = "random:" + std::to_string(seed);
  if (role != EncoderRole::kRepresentation) enc->freeze();
  return enc;
}

std::shared_ptr<Encoder> Encoder::load(const EncoderConfig& config) {
  config.validate();
  fs::path dir(config.pretrained_id);
  if (!fs::exists(dir / "config.json")) {
    throw ConfigError("unknown pretrained_id '" + config.pretrained_id +
                      "': no checkpoint directory with config.json");
  }
  std::ifstream cfg_in(dir / "config.json");
  nlohmann::json cfg = nlohmann::json::parse(cfg_in);
  if (cfg.value("format", "") != std::string("bloomnet_encoder_v1")) {
    throw ConfigError("checkpoint " + config.pretrained_id + ": unsupported format field");
  }
  TransformerSpec spec;
  spec.hidden = cfg.at("hidden_size").get<long>();
  spec.layers = cfg.at("num_layers").get<long>();
  spec.heads = cfg.at("num_heads").get<long>();
  spec.intermediate = cfg.at("intermediate_size").get<long>();
  spec.max_positions = cfg.at("max_position_embeddings").get<long>();
  spec.dropout = cfg.value("dropout", 0.1);
  spec.pooling = parse_pooling(cfg.value("pooling", "cls"));

  if (config.hidden_dim != 0 && config.hidden_dim != spec.hidden) {
    throw ConfigError("checkpoint " + config.pretrained_id + " hidden size " +
                      std::to_string(spec.hidden) + " does not match configured hidden_dim " +
                      std::to_string(config.hidden_dim));
  }

  std::ifstream vocab_in(dir / "vocab.json");
  if (!vocab_in) throw ConfigError("checkpoint " + config.pretrained_id + ": missing vocab.json");
  nlohmann::json vocab_json = nlohmann::json::parse(vocab_in);
  std::vector<std::string> vocab = vocab_json.get<std::vector<std::string>>();
  if (vocab.size() < kNumSpecialTokens ||
      static_cast<long>(vocab.size()) != cfg.at("vocab_size").get<long>()) {
    throw ConfigError("checkpoint " + config.pretrained_id + ": vocab size mismatch");
  }

  auto enc = std::shared_ptr<Encoder>(
      new Encoder(spec, std::move(vocab), config.role, config.max_len, /*init_seed=*/0));
  enc->checkpoint_id_ = config.pretrained_id;
  nn::load_parameters((dir / "weights.bin").string(), enc->parameters());
  if (config.frozen) enc->freeze();
  return enc;
}

void Encoder::save(const std::string& dir) const {
  fs::create_directories(dir);
  nlohmann::ordered_json cfg;
  cfg["format"] = "bloomnet_encoder_v1";
  cfg["hidden_size"] = spec_.hidden;
  cfg["num_layers"] = spec_.layers;
  cfg["num_heads"] = spec_.heads;
  cfg["intermediate_size"] = spec_.intermediate;
  cfg["max_position_embeddings"] = spec_.max_positions;
  cfg["dropout"] = spec_.dropout;
  cfg["pooling"] = pooling_name(spec_.pooling);
  cfg["vocab_size"] = vocab_.size();
  std::ofstream cfg_out(fs::path(dir) / "config.json");
  cfg_out << cfg.dump(2) << "\n";

  std::ofstream vocab_out(fs::path(dir) / "vocab.json");
  vocab_out << nlohmann::json(vocab_).dump() << "\n";

  auto* self = const_cast<Encoder*>(this);
  nn::save_parameters((fs::path(dir) / "weights.bin").string(), self->parameters());
}

TokenizedInput Encoder::tokenize(const std::string& text) const {
  if (trim(text).empty()) throw DataError("tokenize: empty text");
  std::vector<std::string> words = unigrams(text);
  size_t budget = static_cast<size_t>(max_len_) - 2;  // markers included in max_len
  if (words.size() > budget) words.resize(budget);

  TokenizedInput out;
  out.token_ids.reserve(words.size() + 2);
  out.token_ids.push_back(kClsId);
  for (const std::string& w : words) {
    auto it = vocab_index_.find(w);
    out.token_ids.push_back(it == vocab_index_.end() ? kUnkId : it->second);
  }
  out.token_ids.push_back(kSepId);
  out.mask.assign(out.token_ids.size(), 1);
  return out;
}

nn::Var Encoder::encode(nn::Tape& t, const TokenizedInput& x, bool training, Rng* dropout_rng) {
  if (frozen_) return t.constant(encode_pooled(x).vector);
  return encode_impl(t, x, training, dropout_rng);
}

nn::Var Encoder::encode_impl(nn::Tape& t, const TokenizedInput& x, bool training,
                             Rng* dropout_rng) {
  x.validate(max_len_);
  long len = static_cast<long>(x.token_ids.size());
  for (int id : x.token_ids) {
    if (id < 0 || id >= static_cast<int>(vocab_.size())) {
      throw ShapeError("encode: token id outside checkpoint vocabulary");
    }
  }
  bool use_dropout = training && !frozen_ && dropout_rng != nullptr && spec_.dropout > 0.0;

  std::vector<int> positions(static_cast<size_t>(len));
  for (long i = 0; i < len; ++i) positions[static_cast<size_t>(i)] = static_cast<int>(i);

  nn::Var h = t.add(t.embedding_rows(tok_embed_, x.token_ids),
                    t.embedding_rows(pos_embed_, positions));
  h = emb_ln_.forward(t, h);
  if (use_dropout) h = t.dropout(h, spec_.dropout, *dropout_rng, true);

  // Additive key mask: masked positions are invisible as attention keys at
  // every layer, so they cannot influence any unmasked state.
  Matrix key_bias = Matrix::Zero(len, len);
  for (long j = 0; j < len; ++j) {
    if (x.mask[static_cast<size_t>(j)] == 0) key_bias.col(j).setConstant(-1e30);
  }
  for (auto& layer : layers_) {
    h = layer->forward(t, h, key_bias, spec_.dropout, use_dropout ? dropout_rng : nullptr,
                       use_dropout);
  }

  nn::Var pooled;
  if (spec_.pooling == PoolingMode::kCls) {
    if (x.mask[0] == 0) throw ShapeError("encode: first position masked under cls pooling");
    pooled = t.row(h, 0);
  } else {
    pooled = t.masked_mean_rows(h, x.mask);
  }
  if (!pooled.value().allFinite()) {
    throw NumericError("encode: non-finite activations in pooled state");
  }
  return pooled;
}

PooledRepresentation Encoder::encode_pooled(const TokenizedInput& x) {
  if (frozen_) {
    std::string key;
    key.reserve(x.token_ids.size() * 3);
    for (size_t i = 0; i < x.token_ids.size(); ++i) {
      key += std::to_string(x.token_ids[i]);
      key += x.mask[i] ? ',' : ';';
    }
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      auto it = frozen_cache_.find(key);
      if (it != frozen_cache_.end()) return PooledRepresentation{branch(), it->second};
    }
    nn::Tape t;
    nn::RowVector v = encode_impl(t, x, false, nullptr).value().row(0);
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      frozen_cache_.emplace(std::move(key), v);
    }
    return PooledRepresentation{branch(), std::move(v)};
  }
  nn::Tape t;
  return PooledRepresentation{branch(), encode_impl(t, x, false, nullptr).value().row(0)};
}

PooledRepresentation Encoder::encode_pooled(const std::string& text) {
  return encode_pooled(tokenize(text));
}

void Encoder::freeze() {
  for (nn::Parameter* p : parameters()) p->trainable = false;
  frozen_ = true;
  frozen_checksum_ = checksum();
}

uint64_t Encoder::checksum() const {
  auto* self = const_cast<Encoder*>(this);
  return nn::checksum(self->parameters());
}

std::vector<nn::Parameter*> Encoder::parameters() {
  std::vector<nn::Parameter*> out;
  out.push_back(&tok_embed_);
  out.push_back(&pos_embed_);
  emb_ln_.collect(out);
  for (auto& layer : layers_) layer->collect(out);
  return out;
}

std::vector<nn::Parameter*> Encoder::trainable_parameters() {
  std::vector<nn::Parameter*> out;
  for (nn::Parameter* p : parameters()) {
    if (p->trainable) out.push_back(p);
  }
  return out;
}

void write_random_encoder_checkpoint(const std::string& dir, const TransformerSpec& spec,
                                     const std::vector<std::string>& vocab_words, uint64_t seed) {
  auto enc = Encoder::create_random(spec, vocab_words, seed, EncoderRole::kRepresentation,
                                    static_cast<int>(std::min<long>(spec.max_positions, 128)));
  enc->save(dir);
}

}  // namespace bloomnet
