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

#ifndef BLOOMNET_DATAGEN_H_
#define BLOOMNET_DATAGEN_H_

#include "bloomnet/corpus.hpp"

namespace bloomnet {

// Synthetic question corpora shaped like the two reference datasets
// (600 balanced / 141 with counts 26,23,15,23,30,24). Level-specific verb
// banks give models a learnable signal; the second generator draws from a
// different topic pool to simulate distribution shift. Stand-ins for the
// unpublished originals, usable everywhere a dataset file is expected.
Dataset synthesize_dataset1(uint64_t seed);
Dataset synthesize_dataset2(uint64_t seed);

// Custom-size balanced corpus from the dataset1 banks.
Dataset synthesize_balanced(const std::string& name, int per_class, uint64_t seed);

// Label-balanced subset of an existing dataset (per_class examples each).
std::vector<Example> balanced_subset(const Dataset& dataset, int per_class, uint64_t seed);

}  // namespace bloomnet

#endif  // BLOOMNET_DATAGEN_H_
