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

#ifndef BLOOMNET_CORPUS_H_
#define BLOOMNET_CORPUS_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bloomnet/common.hpp"

namespace bloomnet {

// The six cognitive levels, ordinal order fixed so confusion-matrix axes and
// label indices are stable across runs.
enum class CognitiveLevel : int {
  kKnowledge = 0,
  kComprehension = 1,
  kApplication = 2,
  kAnalysis = 3,
  kSynthesis = 4,
  kEvaluation = 5,
};

inline constexpr int kNumLevels = 6;

const std::array<CognitiveLevel, kNumLevels>& all_levels();

// Name <-> ordinal bijection. label_index matches case-insensitively;
// unknown names / out-of-range ordinals throw DataError.
CognitiveLevel label_index(const std::string& name);
const std::string& level_name(CognitiveLevel level);
const std::string& level_name(int ordinal);

struct Example {
  std::string id;
  std::string text;
  CognitiveLevel label;
  std::string source;
};

enum class DataFormat { kCsv, kTsv, kJsonl };

DataFormat parse_format(const std::string& name);
std::string format_name(DataFormat format);

// Notes collected while loading; duplicates are allowed but surfaced.
struct LoadReport {
  size_t rows_read = 0;
  std::vector<std::string> duplicate_text_ids;
};

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, std::vector<Example> examples);

  const std::string& name() const { return name_; }
  const std::vector<Example>& examples() const { return examples_; }
  size_t size() const { return examples_.size(); }
  const std::array<int, kNumLevels>& class_counts() const { return class_counts_; }

  // Recount labels from examples; the stored counts are always this.
  static std::array<int, kNumLevels> recount(const std::vector<Example>& examples);

  // Throws DataError on duplicate ids, empty texts, or count drift.
  void validate(bool require_all_levels = false) const;

  std::vector<std::string> texts() const;

 private:
  std::string name_;
  std::vector<Example> examples_;
  std::array<int, kNumLevels> class_counts_{};
};

// Load a delimited (header `text,label`, optional `id`) or JSONL dataset.
// Errors carry the 1-based row/line number.
Dataset load_dataset(const std::string& path, DataFormat format, LoadReport* report = nullptr);

// Write a dataset back out in the canonical two-column format.
void save_dataset(const Dataset& dataset, const std::string& path, DataFormat format);

struct FoldPlan {
  int k = 0;
  uint64_t seed = 0;
  bool stratified = true;
  std::map<std::string, int> assignment;  // example id -> fold index

  std::vector<std::vector<std::string>> fold_ids() const;
  std::string to_json() const;
  static FoldPlan from_json(const std::string& json_text);
  uint64_t hash() const;
};

// Partition a dataset into k folds. Stratified plans balance per-class
// counts across folds to within one example. Deterministic in
// (dataset order, k, seed, stratified).
FoldPlan make_folds(const Dataset& dataset, int k, uint64_t seed, bool stratified = true);

// Split helpers used by the harness.
struct TrainTestSplit {
  std::vector<Example> train;
  std::vector<Example> test;
};
TrainTestSplit split_by_fold(const Dataset& dataset, const FoldPlan& plan, int test_fold);

// Carve a stratified validation slice out of `pool` (fraction of each class,
// at least one example per represented class).
struct TrainValSplit {
  std::vector<Example> train;
  std::vector<Example> val;
};
TrainValSplit carve_validation(const std::vector<Example>& pool, double fraction, Rng rng);

}  // namespace bloomnet

#endif  // BLOOMNET_CORPUS_H_
