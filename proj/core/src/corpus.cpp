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

#include "bloomnet/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace bloomnet {

namespace {

const std::array<std::string, kNumLevels> kLevelNames = {
    "Knowledge", "Comprehension", "Application", "Analysis", "Synthesis", "Evaluation"};

}  // namespace

const std::array<CognitiveLevel, kNumLevels>& all_levels() {
  static const std::array<CognitiveLevel, kNumLevels> levels = {
      CognitiveLevel::kKnowledge,   CognitiveLevel::kComprehension,
      CognitiveLevel::kApplication, CognitiveLevel::kAnalysis,
      CognitiveLevel::kSynthesis,   CognitiveLevel::kEvaluation};
  return levels;
}

CognitiveLevel label_index(const std::string& name) {
  std::string needle = to_lower(trim(name));
  for (int i = 0; i < kNumLevels; ++i) {
    if (needle == to_lower(kLevelNames[static_cast<size_t>(i)])) {
      return static_cast<CognitiveLevel>(i);
    }
  }
  throw DataError("unknown cognitive level: '" + name + "'");
}

const std::string& level_name(CognitiveLevel level) { return level_name(static_cast<int>(level)); }

const std::string& level_name(int ordinal) {
  if (ordinal < 0 || ordinal >= kNumLevels) {
    throw DataError("cognitive level ordinal out of range: " + std::to_string(ordinal));
  }
  return kLevelNames[static_cast<size_t>(ordinal)];
}

DataFormat parse_format(const std::string& name) {
  std::string n = to_lower(trim(name));
  if (n == "csv") return DataFormat::kCsv;
  if (n == "tsv") return DataFormat::kTsv;
  if (n == "jsonl") return DataFormat::kJsonl;
  throw ConfigError("unknown data format: '" + name + "' (expected csv, tsv, or jsonl)");
}

std::string format_name(DataFormat format) {
  switch (format) {
    case DataFormat::kCsv:
      return "csv";
    case DataFormat::kTsv:
      return "tsv";
    case DataFormat::kJsonl:
      return "jsonl";
  }
  throw ConfigError("invalid data format value");
}

Dataset::Dataset(std::string name, std::vector<Example> examples)
    : name_(std::move(name)), examples_(std::move(examples)) {
  class_counts_ = recount(examples_);
  validate();
}

std::array<int, kNumLevels> Dataset::recount(const std::vector<Example>& examples) {
  std::array<int, kNumLevels> counts{};
  for (const Example& e : examples) counts[static_cast<size_t>(e.label)]++;
  return counts;
}

void Dataset::validate(bool require_all_levels) const {
  std::unordered_set<std::string> seen;
  for (const Example& e : examples_) {
    if (trim(e.text).empty()) throw DataError("dataset " + name_ + ": empty text for id " + e.id);
    if (!seen.insert(e.id).second) {
      throw DataError("dataset " + name_ + ": duplicate id " + e.id);
    }
  }
  if (class_counts_ != recount(examples_)) {
    throw DataError("dataset " + name_ + ": class counts out of sync with examples");
  }
  if (require_all_levels) {
    for (int c : class_counts_) {
      if (c == 0) throw DataError("dataset " + name_ + ": a cognitive level has no examples");
    }
  }
}

std::vector<std::string> Dataset::texts() const {
  std::vector<std::string> out;
  out.reserve(examples_.size());
  for (const Example& e : examples_) out.push_back(e.text);
  return out;
}

namespace {

// RFC-4180ish parser: quoted fields, escaped quotes, embedded delimiters.
// Newlines inside quotes are not supported; rows are physical lines.
std::vector<std::string> parse_delimited_row(const std::string& line, char delim, size_t row_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      in_quotes = true;
    } else if (c == delim) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes) {
    throw DataError("row " + std::to_string(row_no) + ": unterminated quoted field");
  }
  fields.push_back(cur);
  return fields;
}

std::string csv_escape(const std::string& s, char delim) {
  bool needs_quote = s.find(delim) != std::string::npos || s.find('"') != std::string::npos ||
                     s.find('\n') != std::string::npos;
  if (!needs_quote) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

struct HeaderIndex {
  int text = -1;
  int label = -1;
  int id = -1;
};

HeaderIndex parse_header(const std::vector<std::string>& fields) {
  HeaderIndex h;
  for (size_t i = 0; i < fields.size(); ++i) {
    std::string f = to_lower(trim(fields[i]));
    if (f == "text") h.text = static_cast<int>(i);
    else if (f == "label") h.label = static_cast<int>(i);
    else if (f == "id") h.id = static_cast<int>(i);
  }
  if (h.text < 0 || h.label < 0) {
    throw DataError("header must contain 'text' and 'label' columns");
  }
  return h;
}

}  // namespace

Dataset load_dataset(const std::string& path, DataFormat format, LoadReport* report) {
  if (!std::filesystem::exists(path)) throw DataError("dataset file not found: " + path);
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  std::string dataset_name = std::filesystem::path(path).stem().string();
  std::vector<Example> examples;
  LoadReport local;
  std::unordered_map<std::string, std::string> text_first_id;

  auto add_example = [&](std::string id, const std::string& raw_text,
                         const std::string& raw_label, size_t row_no) {
    std::string text = trim(raw_text);
    if (text.empty()) {
      throw DataError(path + ": row " + std::to_string(row_no) + ": empty text");
    }
    CognitiveLevel label;
    try {
      label = label_index(raw_label);
    } catch (const DataError&) {
      throw DataError(path + ": row " + std::to_string(row_no) + ": unknown label '" +
                      trim(raw_label) + "'");
    }
    if (id.empty()) id = dataset_name + ":" + std::to_string(examples.size());
    std::string key = to_lower(text);
    auto [it, inserted] = text_first_id.emplace(key, id);
    if (!inserted) local.duplicate_text_ids.push_back(id);
    examples.push_back(Example{std::move(id), text, label, dataset_name});
  };

  std::string line;
  size_t row_no = 0;
  if (format == DataFormat::kJsonl) {
    while (std::getline(in, line)) {
      ++row_no;
      if (trim(line).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": line " + std::to_string(row_no) + ": " + e.what());
      }
      if (!j.contains("text") || !j.contains("label")) {
        throw DataError(path + ": line " + std::to_string(row_no) +
                        ": record needs 'text' and 'label' fields");
      }
      local.rows_read++;
      add_example(j.value("id", std::string{}), j["text"].get<std::string>(),
                  j["label"].get<std::string>(), row_no);
    }
  } else {
    char delim = (format == DataFormat::kCsv) ? ',' : '\t';
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++row_no;
    HeaderIndex header = parse_header(parse_delimited_row(line, delim, row_no));
    while (std::getline(in, line)) {
      ++row_no;
      if (trim(line).empty()) continue;
      std::vector<std::string> fields;
      try {
        fields = parse_delimited_row(line, delim, row_no);
      } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
      }
      int needed = std::max(header.text, header.label);
      if (static_cast<int>(fields.size()) <= needed) {
        throw DataError(path + ": row " + std::to_string(row_no) + ": expected at least " +
                        std::to_string(needed + 1) + " fields, got " +
                        std::to_string(fields.size()));
      }
      local.rows_read++;
      std::string id;
      if (header.id >= 0 && header.id < static_cast<int>(fields.size())) {
        id = trim(fields[static_cast<size_t>(header.id)]);
      }
      add_example(std::move(id), fields[static_cast<size_t>(header.text)],
                  fields[static_cast<size_t>(header.label)], row_no);
    }
  }

  if (report) *report = local;
  return Dataset(dataset_name, std::move(examples));
}

void save_dataset(const Dataset& dataset, const std::string& path, DataFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path);
  if (format == DataFormat::kJsonl) {
    for (const Example& e : dataset.examples()) {
      nlohmann::ordered_json j;
      j["id"] = e.id;
      j["text"] = e.text;
      j["label"] = level_name(e.label);
      out << j.dump() << "\n";
    }
  } else {
    char delim = (format == DataFormat::kCsv) ? ',' : '\t';
    out << "id" << delim << "text" << delim << "label\n";
    for (const Example& e : dataset.examples()) {
      out << csv_escape(e.id, delim) << delim << csv_escape(e.text, delim) << delim
          << level_name(e.label) << "\n";
    }
  }
}

std::vector<std::vector<std::string>> FoldPlan::fold_ids() const {
  std::vector<std::vector<std::string>> out(static_cast<size_t>(k));
  for (const auto& [id, fold] : assignment) out[static_cast<size_t>(fold)].push_back(id);
  return out;
}

std::string FoldPlan::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["seed"] = seed;
  j["stratified"] = stratified;
  j["assignment"] = nlohmann::ordered_json::object();
  for (const auto& [id, fold] : assignment) j["assignment"][id] = fold;
  return j.dump(2);
}

FoldPlan FoldPlan::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  FoldPlan plan;
  plan.k = j.at("k").get<int>();
  plan.seed = j.at("seed").get<uint64_t>();
  plan.stratified = j.at("stratified").get<bool>();
  for (const auto& [id, fold] : j.at("assignment").items()) {
    plan.assignment[id] = fold.get<int>();
  }
  return plan;
}

uint64_t FoldPlan::hash() const { return fnv1a64(to_json()); }

FoldPlan make_folds(const Dataset& dataset, int k, uint64_t seed, bool stratified) {
  if (k < 2) throw ConfigError("make_folds: k must be >= 2, got " + std::to_string(k));
  if (static_cast<size_t>(k) > dataset.size()) {
    throw ConfigError("make_folds: k exceeds dataset size");
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;

  Rng rng = Rng(seed).substream("folds");
  if (stratified) {
    for (int c = 0; c < kNumLevels; ++c) {
      int count = dataset.class_counts()[static_cast<size_t>(c)];
      if (count > 0 && count < k) {
        throw ConfigError("make_folds: class '" + level_name(c) + "' has " +
                          std::to_string(count) + " examples, fewer than k=" + std::to_string(k) +
                          "; stratification infeasible");
      }
    }
    for (int c = 0; c < kNumLevels; ++c) {
      std::vector<std::string> ids;
      for (const Example& e : dataset.examples()) {
        if (static_cast<int>(e.label) == c) ids.push_back(e.id);
      }
      Rng class_rng = rng.substream("class", static_cast<uint64_t>(c));
      class_rng.shuffle(ids);
      for (size_t i = 0; i < ids.size(); ++i) {
        plan.assignment[ids[i]] = static_cast<int>(i % static_cast<size_t>(k));
      }
    }
  } else {
    std::vector<std::string> ids;
    for (const Example& e : dataset.examples()) ids.push_back(e.id);
    rng.shuffle(ids);
    for (size_t i = 0; i < ids.size(); ++i) {
      plan.assignment[ids[i]] = static_cast<int>(i % static_cast<size_t>(k));
    }
  }

  // Every fold must be populated.
  std::vector<int> sizes(static_cast<size_t>(k), 0);
  for (const auto& [id, fold] : plan.assignment) sizes[static_cast<size_t>(fold)]++;
  for (int s : sizes) {
    if (s == 0) throw ConfigError("make_folds: produced an empty fold; lower k");
  }
  return plan;
}

TrainTestSplit split_by_fold(const Dataset& dataset, const FoldPlan& plan, int test_fold) {
  if (test_fold < 0 || test_fold >= plan.k) throw ConfigError("split_by_fold: fold out of range");
  TrainTestSplit split;
  for (const Example& e : dataset.examples()) {
    auto it = plan.assignment.find(e.id);
    if (it == plan.assignment.end()) {
      throw DataError("split_by_fold: id " + e.id + " missing from fold plan");
    }
    if (it->second == test_fold) split.test.push_back(e);
    else split.train.push_back(e);
  }
  return split;
}

TrainValSplit carve_validation(const std::vector<Example>& pool, double fraction, Rng rng) {
  if (fraction <= 0.0 || fraction >= 1.0) {
    throw ConfigError("carve_validation: fraction must be in (0,1)");
  }
  TrainValSplit split;
  for (int c = 0; c < kNumLevels; ++c) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (static_cast<int>(pool[i].label) == c) idx.push_back(i);
    }
    if (idx.empty()) continue;
    Rng class_rng = rng.substream("val-slice", static_cast<uint64_t>(c));
    class_rng.shuffle(idx);
    size_t n_val = std::max<size_t>(1, static_cast<size_t>(
                                           std::floor(static_cast<double>(idx.size()) * fraction)));
    if (n_val >= idx.size()) n_val = idx.size() - 1;  // keep at least one training example
    for (size_t i = 0; i < idx.size(); ++i) {
      (i < n_val ? split.val : split.train).push_back(pool[idx[i]]);
    }
  }
  // Preserve original pool order within each side for reproducible batching.
  std::unordered_map<std::string, size_t> pos;
  pos.reserve(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) pos[pool[i].id] = i;
  auto by_pool_order = [&pos](const Example& a, const Example& b) {
    return pos.at(a.id) < pos.at(b.id);
  };
  std::sort(split.train.begin(), split.train.end(), by_pool_order);
  std::sort(split.val.begin(), split.val.end(), by_pool_order);
  return split;
}

}  // namespace bloomnet
