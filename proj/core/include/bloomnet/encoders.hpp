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

#ifndef BLOOMNET_ENCODERS_H_
#define BLOOMNET_ENCODERS_H_

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "bloomnet/nn.hpp"

namespace bloomnet {

enum class EncoderRole { kRepresentation, kPos, kNer };
enum class Branch { kRep, kPos, kNer, kHwa };
enum class PoolingMode { kCls, kMean };

std::string role_name(EncoderRole role);
std::string branch_name(Branch branch);
Branch role_branch(EncoderRole role);

struct EncoderConfig {
  EncoderRole role = EncoderRole::kRepresentation;
  std::string pretrained_id;  // checkpoint directory
  int hidden_dim = 0;         // 0 = adopt the checkpoint's hidden size
  int max_len = 128;
  bool frozen = false;

  static EncoderConfig for_role(EncoderRole role, std::string pretrained_id, int max_len = 128);
  void validate() const;  // pos/ner must be frozen, representation must not
};

struct TokenizedInput {
  std::vector<int> token_ids;
  std::vector<int> mask;  // 1 = real token, 0 = padding

  int length() const;  // number of unmasked positions
  void validate(int max_len) const;
};

struct PooledRepresentation {
  Branch branch;
  nn::RowVector vector;
  long dim() const { return vector.size(); }
};

// Architecture hyperparameters persisted in a checkpoint's config.json.
struct TransformerSpec {
  long hidden = 768;
  long layers = 2;
  long heads = 12;
  long intermediate = 3072;
  long max_positions = 512;
  double dropout = 0.1;
  PoolingMode pooling = PoolingMode::kCls;
};

// Reserved vocabulary slots shared by every encoder checkpoint.
inline constexpr int kPadId = 0;
inline constexpr int kClsId = 1;
inline constexpr int kSepId = 2;
inline constexpr int kUnkId = 3;
inline constexpr int kNumSpecialTokens = 4;

// A bidirectional transformer encoder with a word-level vocabulary, loaded
// from (or saved to) a self-contained checkpoint directory holding
// config.json, vocab.json, and weights.bin. A checkpoint fine-tuned for POS
// or NER tagging plugs in through the same format; the encoder only ever
// exposes the pooled sequence state.
class Encoder {
 public:
  static std::shared_ptr<Encoder> load(const EncoderConfig& config);
  static std::shared_ptr<Encoder> create_random(const TransformerSpec& spec,
                                                const std::vector<std::string>& vocab_words,
                                                uint64_t seed,
                                                EncoderRole role = EncoderRole::kRepresentation,
                                                int max_len = 128);
  void save(const std::string& dir) const;

  // Deterministic: lowercased word unigrams wrapped in begin/end markers,
  // truncated to max_len including the markers.
  TokenizedInput tokenize(const std::string& text) const;

  // Graph-building pooled encode (1 x hidden). Frozen encoders always run
  // in eval mode and contribute constants to the tape.
  nn::Var encode(nn::Tape& t, const TokenizedInput& x, bool training = false,
                 Rng* dropout_rng = nullptr);

  // Eval-mode pooled state; memoized for frozen encoders.
  PooledRepresentation encode_pooled(const TokenizedInput& x);
  PooledRepresentation encode_pooled(const std::string& text);

  // Exclude every parameter from gradient updates, pin eval mode, and
  // record the parameter checksum.
  void freeze();
  bool frozen() const { return frozen_; }
  uint64_t frozen_checksum() const { return frozen_checksum_; }
  uint64_t checksum() const;

  long hidden_dim() const { return spec_.hidden; }
  int max_len() const { return max_len_; }
  EncoderRole role() const { return role_; }
  Branch branch() const { return role_branch(role_); }
  PoolingMode pooling() const { return spec_.pooling; }
  const TransformerSpec& spec() const { return spec_; }
  const std::string& checkpoint_id() const { return checkpoint_id_; }
  size_t vocab_size() const { return vocab_.size(); }

  std::vector<nn::Parameter*> parameters();
  std::vector<nn::Parameter*> trainable_parameters();

 private:
  Encoder(TransformerSpec spec, std::vector<std::string> vocab, EncoderRole role, int max_len,
          uint64_t init_seed);

  nn::Var encode_impl(nn::Tape& t, const TokenizedInput& x, bool training, Rng* dropout_rng);

  TransformerSpec spec_;
  EncoderRole role_;
  int max_len_;
  std::string checkpoint_id_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> vocab_index_;

  nn::Parameter tok_embed_;  // vocab x hidden
  nn::Parameter pos_embed_;  // max_positions x hidden
  nn::LayerNorm emb_ln_;
  std::vector<std::unique_ptr<nn::TransformerLayer>> layers_;

  bool frozen_ = false;
  uint64_t frozen_checksum_ = 0;

  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, nn::RowVector> frozen_cache_;
};

// Write a randomly initialized checkpoint directory. `vocab_words` is the
// token list without the reserved specials; duplicates are dropped.
void write_random_encoder_checkpoint(const std::string& dir, const TransformerSpec& spec,
                                     const std::vector<std::string>& vocab_words, uint64_t seed);

}  // namespace bloomnet

#endif  // BLOOMNET_ENCODERS_H_
