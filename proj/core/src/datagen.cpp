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

#include "bloomnet/datagen.hpp"

#include <array>
#include <cctype>

namespace bloomnet {

namespace {

struct LevelBank {
  std::vector<const char*> verbs;
  std::vector<const char*> templates;  // {verb} and {topic} slots
};

const std::array<LevelBank, kNumLevels>& level_banks() {
  static const std::array<LevelBank, kNumLevels> banks = {{
      // Knowledge
      {{"define", "list", "name", "state", "recall", "identify", "label", "write down"},
       {"{verb} the key terms used in {topic}.", "{verb} the main facts about {topic}.",
        "{verb} what is meant by {topic}."}},
      // Comprehension
      {{"explain", "summarize", "describe", "paraphrase", "restate", "interpret", "clarify",
        "outline"},
       {"{verb} the idea behind {topic} in your own words.", "{verb} how {topic} works.",
        "{verb} the meaning of {topic} for a beginner."}},
      // Application
      {{"apply", "solve", "use", "demonstrate", "compute", "calculate", "illustrate",
        "practice"},
       {"{verb} the method of {topic} to a new problem.",
        "{verb} an everyday situation using {topic}.",
        "{verb} the rules of {topic} on the given exercise."}},
      // Analysis
      {{"analyze", "compare", "contrast", "differentiate", "examine", "categorize",
        "distinguish", "investigate"},
       {"{verb} the components of {topic}.", "{verb} {topic} with a related approach.",
        "{verb} the strengths and weaknesses of {topic}."}},
      // Synthesis
      {{"design", "construct", "propose", "formulate", "develop", "compose", "devise",
        "invent"},
       {"{verb} a new experiment involving {topic}.", "{verb} a plan that combines {topic}.",
        "{verb} an original model based on {topic}."}},
      // Evaluation
      {{"evaluate", "justify", "critique", "assess", "defend", "judge", "recommend", "appraise"},
       {"{verb} the effectiveness of {topic}.", "{verb} whether {topic} is the best choice.",
        "{verb} the arguments for and against {topic}."}},
  }};
  return banks;
}

const std::vector<const char*>& topics_primary() {
  static const std::vector<const char*> topics = {
      "photosynthesis",        "the water cycle",        "supply and demand",
      "binary search",         "newton's laws",          "the french revolution",
      "cellular respiration",  "object oriented design", "the periodic table",
      "plate tectonics",       "probability theory",     "the immune system",
      "renaissance art",       "data structures",        "electromagnetic induction",
      "the nitrogen cycle",    "roman architecture",     "molecular genetics",
      "linear equations",      "acid base reactions",    "the solar system",
      "shakespearean drama",   "operating systems",      "photosensitive materials",
      "classical conditioning"};
  return topics;
}

const std::vector<const char*>& topics_shifted() {
  static const std::vector<const char*> topics = {
      "recursion in programming", "the carbon cycle",     "market equilibrium",
      "sorting algorithms",       "thermodynamics",       "the industrial revolution",
      "enzyme kinetics",          "relational databases", "chemical bonding",
      "seismic waves",            "statistical inference", "vaccination programs",
      "baroque music",            "graph theory",          "geometric optics",
      "protein folding",          "medieval trade routes", "machine translation",
      "quadratic functions",      "electric circuits"};
  return topics;
}

std::string instantiate(const std::string& tmpl, const std::string& verb,
                        const std::string& topic) {
  std::string out = tmpl;
  auto replace_all = [&out](const std::string& slot, const std::string& value) {
    size_t pos = 0;
    while ((pos = out.find(slot, pos)) != std::string::npos) {
      out.replace(pos, slot.size(), value);
      pos += value.size();
    }
  };
  replace_all("{verb}", verb);
  replace_all("{topic}", topic);
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

Dataset synthesize(const std::string& name, const std::array<int, kNumLevels>& counts,
                   const std::vector<const char*>& topics, uint64_t seed) {
  Rng rng = Rng(seed).substream("datagen");
  std::vector<Example> examples;
  int idx = 0;
  for (int level = 0; level < kNumLevels; ++level) {
    const LevelBank& bank = level_banks()[static_cast<size_t>(level)];
    // Deterministic stride walk through the verb x topic x template grid;
    // strides coprime with the bank sizes avoid early repeats.
    size_t verb_start = static_cast<size_t>(rng.uniform_int(static_cast<int>(bank.verbs.size())));
    size_t topic_start = static_cast<size_t>(rng.uniform_int(static_cast<int>(topics.size())));
    for (int i = 0; i < counts[static_cast<size_t>(level)]; ++i) {
      const char* verb = bank.verbs[(verb_start + static_cast<size_t>(i)) % bank.verbs.size()];
      const char* topic =
          topics[(topic_start + static_cast<size_t>(i) * 7) % topics.size()];
      const char* tmpl =
          bank.templates[static_cast<size_t>(i) % bank.templates.size()];
      Example e;
      e.id = name + ":" + std::to_string(idx++);
      e.text = instantiate(tmpl, verb, topic);
      e.label = static_cast<CognitiveLevel>(level);
      e.source = name;
      examples.push_back(std::move(e));
    }
  }
  return Dataset(name, std::move(examples));
}

}  // namespace

Dataset synthesize_dataset1(uint64_t seed) {
  return synthesize("synthetic-dataset1", {100, 100, 100, 100, 100, 100}, topics_primary(), seed);
}

Dataset synthesize_dataset2(uint64_t seed) {
  return synthesize("synthetic-dataset2", {26, 23, 15, 23, 30, 24}, topics_shifted(), seed);
}

Dataset synthesize_balanced(const std::string& name, int per_class, uint64_t seed) {
  std::array<int, kNumLevels> counts;
  counts.fill(per_class);
  return synthesize(name, counts, topics_primary(), seed);
}

std::vector<Example> balanced_subset(const Dataset& dataset, int per_class, uint64_t seed) {
  Rng rng = Rng(seed).substream("subset");
  std::vector<Example> out;
  for (int level = 0; level < kNumLevels; ++level) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < dataset.size(); ++i) {
      if (static_cast<int>(dataset.examples()[i].label) == level) idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) < per_class) {
      throw DataError("balanced_subset: class " + level_name(level) + " has only " +
                      std::to_string(idx.size()) + " examples");
    }
    Rng class_rng = rng.substream("class", static_cast<uint64_t>(level));
    class_rng.shuffle(idx);
    for (int i = 0; i < per_class; ++i) out.push_back(dataset.examples()[idx[static_cast<size_t>(i)]]);
  }
  return out;
}

}  // namespace bloomnet
