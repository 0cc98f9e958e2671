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

#ifndef BLOOMNET_COMMON_H_
#define BLOOMNET_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bloomnet {

// Error hierarchy. Everything user-facing derives from Error so the CLI can
// map failures to exit codes without enumerating causes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input files, malformed rows, unknown labels.
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or argument values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tensor/layer dimension mismatches.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Registry entries that are reserved but not shipped.
class NotImplementedError : public Error {
 public:
  using Error::Error;
};

// 64-bit FNV-1a over raw bytes. Used for parameter checksums and substream
// derivation; not cryptographic.
uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL);
uint64_t fnv1a64(std::string_view s, uint64_t seed = 0xcbf29ce484222325ULL);

// Deterministic RNG with named substreams. All randomness in a run flows
// from one root seed; substreams keep independent consumers (fold shuffles,
// parameter init, batch order, dropout) from perturbing each other.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Derive an independent stream keyed by name (and optionally an index).
  Rng substream(std::string_view name) const;
  Rng substream(std::string_view name, uint64_t index) const;

  uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal(double mean = 0.0, double stddev = 1.0);
  int uniform_int(int n);                 // [0, n)

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// String helpers shared by the data loaders and tokenizers.
std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

// Lowercased word unigrams with punctuation stripped; the shared word-level
// view used by the encoder tokenizers, the HWA vocabulary, and the
// classical baselines.
std::vector<std::string> unigrams(std::string_view text);

}  // namespace bloomnet

#endif  // BLOOMNET_COMMON_H_
