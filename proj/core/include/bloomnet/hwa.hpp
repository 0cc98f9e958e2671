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

#ifndef BLOOMNET_HWA_H_
#define BLOOMNET_HWA_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "bloomnet/encoders.hpp"
#include "bloomnet/nn.hpp"

namespace bloomnet {

// Word-level vocabulary for the recurrent branch and the from-scratch
// baselines. Ids 0/1 are reserved for padding and unknown words.
class WordVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  WordVocab() = default;
  explicit WordVocab(std::vector<std::string> id_to_word);

  // Lowercased, punctuation-split words, minimum frequency 1.
  static WordVocab build(const std::vector<std::string>& texts);

  int id(const std::string& word) const;  // kUnk when absent
  size_t size() const { return id_to_word_.size(); }
  const std::vector<std::string>& words() const { return id_to_word_; }

  std::string to_json() const;  // list in id order
  static WordVocab from_json(const std::string& json_text);

 private:
  std::vector<std::string> id_to_word_;
  std::unordered_map<std::string, int> word_to_id_;
};

struct WordSequence {
  std::vector<int> word_ids;
  std::vector<int> mask;  // contiguous prefix of ones

  int length() const;
  void validate() const;
  // Extend with padding positions up to `len`.
  WordSequence padded_to(size_t len) const;
};

// Word-id view of a text. Throws DataError when no words survive splitting.
WordSequence encode_words(const WordVocab& vocab, const std::string& text, int max_words);

struct HwaConfig {
  long embed_dim = 300;
  long recurrent_hidden = 384;  // per direction
  long attention_dim = 0;       // 0 = output_dim()
  long layers = 1;
  int max_words = 128;
  long output_dim() const { return 2 * recurrent_hidden; }
  long effective_attention_dim() const {
    return attention_dim > 0 ? attention_dim : output_dim();
  }
  void validate() const;
};

struct AttentionResult {
  nn::Var context;  // 1 x hidden
  nn::Var alphas;   // 1 x len, zero exactly at masked positions
};

// Learned word-level attention pooling: u_i = tanh(W h_i + b),
// alpha_i = softmax(u_i . u_w) over unmasked i, context = sum alpha_i h_i.
class WordAttentionLayer {
 public:
  WordAttentionLayer(const std::string& name, long hidden, long attention_dim, Rng& rng);
  AttentionResult forward(nn::Tape& t, nn::Var hidden_states, const std::vector<int>& mask);
  void collect(std::vector<nn::Parameter*>& out);
  nn::Parameter& proj_weight() { return w_; }
  nn::Parameter& proj_bias() { return b_; }
  nn::Parameter& context_vector() { return u_; }

 private:
  nn::Parameter w_;  // attention_dim x hidden
  nn::Parameter b_;  // 1 x attention_dim
  nn::Parameter u_;  // 1 x attention_dim
};

// Embedding -> bidirectional GRU -> word attention -> pooled vector.
class HwaBranch {
 public:
  HwaBranch(const HwaConfig& config, const WordVocab& vocab, Rng& rng);

  nn::Var forward(nn::Tape& t, const WordSequence& seq);
  AttentionResult forward_with_attention(nn::Tape& t, const WordSequence& seq);
  PooledRepresentation forward_pooled(const std::string& text);

  const HwaConfig& config() const { return config_; }
  const WordVocab& vocab() const { return vocab_; }
  long output_dim() const { return config_.output_dim(); }
  std::vector<nn::Parameter*> parameters();
  WordSequence encode(const std::string& text) const;

 private:
  HwaConfig config_;
  WordVocab vocab_;
  nn::Parameter embedding_;  // vocab x embed_dim
  nn::BiGru gru_;
  WordAttentionLayer attention_;
};

}  // namespace bloomnet

#endif  // BLOOMNET_HWA_H_
