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

#include "bloomnet/hwa.hpp"

#include <nlohmann/json.hpp>

namespace bloomnet {

using nn::Matrix;
using nn::Var;

WordVocab::WordVocab(std::vector<std::string> id_to_word) : id_to_word_(std::move(id_to_word)) {
  if (id_to_word_.size() < 2 || id_to_word_[0] != "<pad>" || id_to_word_[1] != "<unk>") {
    throw DataError("word vocab must start with <pad>, <unk>");
  }
  for (size_t i = 0; i < id_to_word_.size(); ++i) {
    if (!word_to_id_.emplace(id_to_word_[i], static_cast<int>(i)).second) {
      throw DataError("word vocab has duplicate entry: " + id_to_word_[i]);
    }
  }
}

WordVocab WordVocab::build(const std::vector<std::string>& texts) {
  std::vector<std::string> id_to_word = {"<pad>", "<unk>"};
  std::unordered_map<std::string, int> seen = {{"<pad>", 0}, {"<unk>", 1}};
  for (const std::string& text : texts) {
    for (const std::string& w : unigrams(text)) {
      if (seen.emplace(w, static_cast<int>(id_to_word.size())).second) {
        id_to_word.push_back(w);
      }
    }
  }
  return WordVocab(std::move(id_to_word));
}

int WordVocab::id(const std::string& word) const {
  auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? kUnk : it->second;
}

std::string WordVocab::to_json() const { return nlohmann::json(id_to_word_).dump(); }

WordVocab WordVocab::from_json(const std::string& json_text) {
  return WordVocab(nlohmann::json::parse(json_text).get<std::vector<std::string>>());
}

int WordSequence::length() const {
  int n = 0;
  for (int m : mask) n += (m != 0);
  return n;
}

void WordSequence::validate() const {
  if (word_ids.size() != mask.size()) throw ShapeError("word sequence: ids/mask length mismatch");
  if (word_ids.empty()) throw ShapeError("word sequence: empty");
  bool seen_pad = false;
  int ones = 0;
  for (int m : mask) {
    if (m != 0 && m != 1) throw ShapeError("word sequence: mask entries must be 0/1");
    if (m == 0) seen_pad = true;
    else if (seen_pad) throw ShapeError("word sequence: mask must be a contiguous prefix of ones");
    else ++ones;
  }
  if (ones == 0) throw ShapeError("word sequence: all positions masked");
}

WordSequence WordSequence::padded_to(size_t len) const {
  if (len < word_ids.size()) throw ShapeError("padded_to: target shorter than sequence");
  WordSequence out = *this;
  out.word_ids.resize(len, WordVocab::kPad);
  out.mask.resize(len, 0);
  return out;
}

WordSequence encode_words(const WordVocab& vocab, const std::string& text, int max_words) {
  std::vector<std::string> words = unigrams(text);
  if (words.empty()) throw DataError("encode_words: no words left after splitting: '" + text + "'");
  if (static_cast<int>(words.size()) > max_words) words.resize(static_cast<size_t>(max_words));
  WordSequence seq;
  seq.word_ids.reserve(words.size());
  for (const std::string& w : words) seq.word_ids.push_back(vocab.id(w));
  seq.mask.assign(seq.word_ids.size(), 1);
  return seq;
}

void HwaConfig::validate() const {
  if (embed_dim <= 0 || recurrent_hidden <= 0 || layers <= 0 || max_words <= 0) {
    throw ConfigError("hwa config: dimensions must be positive");
  }
  if (attention_dim < 0) throw ConfigError("hwa config: attention_dim must be >= 0");
}

WordAttentionLayer::WordAttentionLayer(const std::string& name, long hidden, long attention_dim,
                                       Rng& rng)
    : w_(name + ".w", nn::xavier_uniform(attention_dim, hidden, rng)),
      b_(name + ".b", Matrix::Zero(1, attention_dim)),
      u_(name + ".u", nn::xavier_uniform(1, attention_dim, rng)) {}

AttentionResult WordAttentionLayer::forward(nn::Tape& t, Var hidden_states,
                                            const std::vector<int>& mask) {
  long len = hidden_states.rows();
  if (static_cast<long>(mask.size()) != len) {
    throw ShapeError("word attention: mask length != sequence length");
  }
  int unmasked = 0;
  for (int m : mask) unmasked += (m != 0);
  if (unmasked == 0) throw ShapeError("word attention: all positions masked");

  // u_i = tanh(W h_i + b); score_i = u_i . u_w
  Var proj = t.tanh(t.add_row_broadcast(t.matmul(hidden_states, t.transpose(t.param(w_))),
                                        t.param(b_)));
  Var scores = t.transpose(t.matmul(proj, t.transpose(t.param(u_))));  // 1 x len

  // Masked scores get a large negative bias; their softmax weight
  // underflows to exactly zero.
  Matrix bias = Matrix::Zero(1, len);
  for (long i = 0; i < len; ++i) {
    if (mask[static_cast<size_t>(i)] == 0) bias(0, i) = -1e30;
  }
  Var alphas = t.softmax_rows(t.add(scores, t.constant(bias)));
  Var context = t.matmul(alphas, hidden_states);
  return AttentionResult{context, alphas};
}

void WordAttentionLayer::collect(std::vector<nn::Parameter*>& out) {
  out.push_back(&w_);
  out.push_back(&b_);
  out.push_back(&u_);
}

HwaBranch::HwaBranch(const HwaConfig& config, const WordVocab& vocab, Rng& rng)
    : config_(config),
      vocab_(vocab),
      embedding_("hwa.embedding",
                 nn::normal_init(static_cast<long>(vocab.size()), config.embed_dim, 0.1, rng)),
      gru_("hwa.gru", config.embed_dim, config.recurrent_hidden, config.layers, rng),
      attention_("hwa.attention", config.output_dim(), config.effective_attention_dim(), rng) {
  config_.validate();
}

Var HwaBranch::forward(nn::Tape& t, const WordSequence& seq) {
  return forward_with_attention(t, seq).context;
}

AttentionResult HwaBranch::forward_with_attention(nn::Tape& t, const WordSequence& seq) {
  seq.validate();
  int real_len = seq.length();

  // The recurrent encoder runs over the unmasked prefix only; padded
  // positions contribute zero rows that attention then masks out.
  std::vector<Var> inputs;
  inputs.reserve(static_cast<size_t>(real_len));
  std::vector<int> prefix_ids(seq.word_ids.begin(), seq.word_ids.begin() + real_len);
  Var embedded = t.embedding_rows(embedding_, prefix_ids);
  for (int i = 0; i < real_len; ++i) inputs.push_back(t.row(embedded, i));
  std::vector<Var> states = gru_.forward(t, inputs);

  std::vector<Var> rows;
  rows.reserve(seq.word_ids.size());
  for (size_t i = 0; i < seq.word_ids.size(); ++i) {
    if (static_cast<int>(i) < real_len) {
      rows.push_back(states[i]);
    } else {
      rows.push_back(t.constant(Matrix::Zero(1, config_.output_dim())));
    }
  }
  Var hidden = t.stack_rows(rows);
  return attention_.forward(t, hidden, seq.mask);
}

PooledRepresentation HwaBranch::forward_pooled(const std::string& text) {
  nn::Tape t;
  WordSequence seq = encode(text);
  Var ctx = forward(t, seq);
  if (!ctx.value().allFinite()) throw NumericError("hwa: non-finite context vector");
  return PooledRepresentation{Branch::kHwa, ctx.value().row(0)};
}

WordSequence HwaBranch::encode(const std::string& text) const {
  return encode_words(vocab_, text, config_.max_words);
}

std::vector<nn::Parameter*> HwaBranch::parameters() {
  std::vector<nn::Parameter*> out;
  out.push_back(&embedding_);
  gru_.collect(out);
  attention_.collect(out);
  return out;
}

}  // namespace bloomnet
