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

#include "bloomnet/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

extern char** environ;

namespace bloomnet {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& value) {
  std::string v = to_lower(trim(value));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config [" + section + "] " + key + ": expected a boolean, got '" + value +
                    "'");
}

template <typename T>
T parse_number(const std::string& section, const std::string& key, const std::string& value,
               T (*conv)(const std::string&)) {
  try {
    return conv(value);
  } catch (const std::exception&) {
    throw ConfigError("config [" + section + "] " + key + ": expected a number, got '" + value +
                      "'");
  }
}

int to_int(const std::string& s) { return std::stoi(s); }
long to_long(const std::string& s) { return std::stol(s); }
double to_double(const std::string& s) { return std::stod(s); }
uint64_t to_u64(const std::string& s) { return std::stoull(s); }

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  for (const std::string& part : split(value, ',')) {
    std::string p = trim(part);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& values) {
  std::string out;
  for (const std::string& v : values) {
    if (!out.empty()) out += ", ";
    out += v;
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string& section,
                                  const std::string& key, const std::string& value)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  auto str = [](std::string ExperimentConfig::* field) {
    return Setter([field](ExperimentConfig& c, const std::string&, const std::string&,
                          const std::string& v) { c.*field = trim(v); });
  };
  auto integer = [](int ExperimentConfig::* field) {
    return Setter([field](ExperimentConfig& c, const std::string& s, const std::string& k,
                          const std::string& v) { c.*field = parse_number<int>(s, k, v, to_int); });
  };
  auto longint = [](long ExperimentConfig::* field) {
    return Setter([field](ExperimentConfig& c, const std::string& s, const std::string& k,
                          const std::string& v) {
      c.*field = parse_number<long>(s, k, v, to_long);
    });
  };
  auto dbl = [](double ExperimentConfig::* field) {
    return Setter([field](ExperimentConfig& c, const std::string& s, const std::string& k,
                          const std::string& v) {
      c.*field = parse_number<double>(s, k, v, to_double);
    });
  };
  static const std::map<std::string, std::map<std::string, Setter>> kSchema = {
      {"data",
       {
           {"train", str(&ExperimentConfig::train_path)},
           {"ood", str(&ExperimentConfig::ood_path)},
           {"format", str(&ExperimentConfig::format)},
       }},
      {"model",
       {
           {"name", str(&ExperimentConfig::model)},
           {"rep_checkpoint", str(&ExperimentConfig::rep_checkpoint)},
           {"pos_checkpoint", str(&ExperimentConfig::pos_checkpoint)},
           {"ner_checkpoint", str(&ExperimentConfig::ner_checkpoint)},
           {"encoder_max_len", integer(&ExperimentConfig::encoder_max_len)},
           {"hwa_embed_dim", longint(&ExperimentConfig::hwa_embed_dim)},
           {"hwa_hidden", longint(&ExperimentConfig::hwa_hidden)},
           {"hwa_attention_dim", longint(&ExperimentConfig::hwa_attention_dim)},
           {"hwa_layers", longint(&ExperimentConfig::hwa_layers)},
           {"hwa_max_words", integer(&ExperimentConfig::hwa_max_words)},
           {"fusion_dropout", dbl(&ExperimentConfig::fusion_dropout)},
       }},
      {"train",
       {
           {"learning_rate", dbl(&ExperimentConfig::learning_rate)},
           {"epochs", integer(&ExperimentConfig::epochs)},
           {"batch_size", integer(&ExperimentConfig::batch_size)},
           {"patience", integer(&ExperimentConfig::patience)},
           {"seed",
            Setter([](ExperimentConfig& c, const std::string& s, const std::string& k,
                      const std::string& v) { c.seed = parse_number<uint64_t>(s, k, v, to_u64); })},
           {"val_fraction", dbl(&ExperimentConfig::val_fraction)},
       }},
      {"folds",
       {
           {"k", integer(&ExperimentConfig::k)},
           {"stratified",
            Setter([](ExperimentConfig& c, const std::string& s, const std::string& k,
                      const std::string& v) { c.stratified = parse_bool(s, k, v); })},
       }},
      {"run",
       {
           {"output_dir", str(&ExperimentConfig::output_dir)},
           {"run_id", str(&ExperimentConfig::run_id)},
           {"workers", integer(&ExperimentConfig::workers)},
       }},
      {"compare",
       {
           {"models",
            Setter([](ExperimentConfig& c, const std::string&, const std::string&,
                      const std::string& v) { c.compare_models = parse_list(v); })},
           {"reference", str(&ExperimentConfig::reference)},
       }},
  };
  return kSchema;
}

void apply_entry(ExperimentConfig& config, const std::string& section, const std::string& key,
                 const std::string& value) {
  if (section == "baseline") {
    config.baseline_hyperparams[key] = trim(value);
    return;
  }
  auto sec_it = schema().find(section);
  if (sec_it == schema().end()) {
    throw ConfigError("config: unknown section [" + section + "]");
  }
  auto key_it = sec_it->second.find(key);
  if (key_it == sec_it->second.end()) {
    throw ConfigError("config: unknown key '" + key + "' in section [" + section + "]");
  }
  key_it->second(config, section, key, value);
}

void apply_environment(ExperimentConfig& config) {
  const std::string prefix = "BLOOMNET_";
  for (char** env = environ; *env != nullptr; ++env) {
    std::string entry(*env);
    if (entry.rfind(prefix, 0) != 0) continue;
    size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(prefix.size(), eq - prefix.size());
    std::string value = entry.substr(eq + 1);
    size_t underscore = name.find('_');
    if (underscore == std::string::npos) {
      throw ConfigError("environment override " + entry.substr(0, eq) +
                        ": expected BLOOMNET_<SECTION>_<KEY>");
    }
    std::string section = to_lower(name.substr(0, underscore));
    std::string key = to_lower(name.substr(underscore + 1));
    apply_entry(config, section, key, value);
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_ini_string(const std::string& text, bool apply_env) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      }
      section = to_lower(trim(s.substr(1, s.size() - 2)));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = to_lower(trim(s.substr(0, eq)));
    std::string value = trim(s.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": key outside any section");
    }
    apply_entry(config, section, key, value);
  }
  if (apply_env) apply_environment(config);
  return config;
}

ExperimentConfig ExperimentConfig::from_ini_file(const std::string& path, bool apply_env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_ini_string(text, apply_env);
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream out;
  out << "[data]\n";
  out << "train = " << train_path << "\n";
  out << "ood = " << ood_path << "\n";
  out << "format = " << format << "\n";
  out << "\n[model]\n";
  out << "name = " << model << "\n";
  out << "rep_checkpoint = " << rep_checkpoint << "\n";
  out << "pos_checkpoint = " << pos_checkpoint << "\n";
  out << "ner_checkpoint = " << ner_checkpoint << "\n";
  out << "encoder_max_len = " << encoder_max_len << "\n";
  out << "hwa_embed_dim = " << hwa_embed_dim << "\n";
  out << "hwa_hidden = " << hwa_hidden << "\n";
  out << "hwa_attention_dim = " << hwa_attention_dim << "\n";
  out << "hwa_layers = " << hwa_layers << "\n";
  out << "hwa_max_words = " << hwa_max_words << "\n";
  out << "fusion_dropout = " << fmt_double(fusion_dropout) << "\n";
  if (!baseline_hyperparams.empty()) {
    out << "\n[baseline]\n";
    for (const auto& [key, value] : baseline_hyperparams) {
      out << key << " = " << value << "\n";
    }
  }
  out << "\n[train]\n";
  out << "learning_rate = " << fmt_double(learning_rate) << "\n";
  out << "epochs = " << epochs << "\n";
  out << "batch_size = " << batch_size << "\n";
  out << "patience = " << patience << "\n";
  out << "seed = " << seed << "\n";
  out << "val_fraction = " << fmt_double(val_fraction) << "\n";
  out << "\n[folds]\n";
  out << "k = " << k << "\n";
  out << "stratified = " << (stratified ? "true" : "false") << "\n";
  out << "\n[run]\n";
  out << "output_dir = " << output_dir << "\n";
  out << "run_id = " << run_id << "\n";
  out << "workers = " << workers << "\n";
  out << "\n[compare]\n";
  out << "models = " << join_list(compare_models) << "\n";
  out << "reference = " << reference << "\n";
  return out.str();
}

void ExperimentConfig::validate(bool check_paths) const {
  parse_format(format);
  train_config().validate();
  if (k < 2) throw ConfigError("config [folds] k: must be >= 2");
  if (workers < 1) throw ConfigError("config [run] workers: must be >= 1");
  if (train_path.empty()) throw ConfigError("config [data] train: path is required");
  if (check_paths) {
    if (!std::filesystem::exists(train_path)) {
      throw ConfigError("config [data] train: file not found: " + train_path);
    }
    if (!ood_path.empty() && !std::filesystem::exists(ood_path)) {
      throw ConfigError("config [data] ood: file not found: " + ood_path);
    }
  }
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig t;
  t.learning_rate = learning_rate;
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.patience = patience;
  t.seed = seed;
  t.val_fraction = val_fraction;
  return t;
}

EncoderConfig ExperimentConfig::rep_encoder_config() const {
  if (rep_checkpoint.empty()) {
    throw ConfigError("config [model] rep_checkpoint: required for encoder-based models");
  }
  return EncoderConfig::for_role(EncoderRole::kRepresentation, rep_checkpoint, encoder_max_len);
}

BloomNetConfig ExperimentConfig::bloomnet_config() const {
  BloomNetConfig b;
  b.rep = rep_encoder_config();
  if (pos_checkpoint.empty() || ner_checkpoint.empty()) {
    throw ConfigError("config [model]: pos_checkpoint and ner_checkpoint are required for the "
                      "fusion model");
  }
  b.pos = EncoderConfig::for_role(EncoderRole::kPos, pos_checkpoint, encoder_max_len);
  b.ner = EncoderConfig::for_role(EncoderRole::kNer, ner_checkpoint, encoder_max_len);
  b.hwa.embed_dim = hwa_embed_dim;
  b.hwa.recurrent_hidden = hwa_hidden;
  b.hwa.attention_dim = hwa_attention_dim;
  b.hwa.layers = hwa_layers;
  b.hwa.max_words = hwa_max_words;
  b.fusion_dropout = fusion_dropout;
  b.seed = seed;
  b.name = "bloomnet";
  return b;
}

}  // namespace bloomnet
