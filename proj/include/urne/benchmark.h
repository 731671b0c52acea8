// Copyright 2026 The urne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef URNE_BENCHMARK_H_
#define URNE_BENCHMARK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "urne/corpus.h"

namespace urne {

// Synthetic benchmark for the experiment harness. Entities are random
// consonant-vowel words planted into carrier templates. Every
// under-represented entity is a single-character mutation of a richly
// represented parent from the same category, so the confusion model always
// offers the strong competitor against the weak reference word.

struct BenchmarkConfig {
  int rr_per_category = 13;
  int ur_per_category = 6;
  int train_utts_per_rr_ne = 30;
  int test_utts_per_ur_ne = 3;
  // Carrier templates each entity cycles over in the training text. Keeping
  // this below the template inventory leaves unseen contexts for the test
  // side.
  int templates_per_ne = 3;
  int filler_test_utts = 12;
  uint64_t seed = 0;
};

struct Benchmark {
  Corpus train;
  Corpus test;
  std::vector<NamedEntity> inventory;
};

// Carrier templates with one entity slot each.
const std::vector<std::vector<std::string>>& BenchmarkTemplates();

// Throws ConfigError on non-positive sizes or templates_per_ne out of range.
Benchmark MakeBenchmark(const BenchmarkConfig& config);

// train.txt, test.txt, inventory.tsv under dir, each with the header
// comment. dir must exist.
void WriteBenchmarkFiles(const Benchmark& bench, const std::string& dir,
                         const std::string& header = "");

// Reads the three files back; inventory counts are refilled from train.txt.
Benchmark LoadBenchmarkFiles(const std::string& dir);

// Union of training vocabulary, test vocabulary, and inventory surfaces;
// sorted. This is the word list the confusion model is built over.
std::vector<std::string> ConfusionVocabulary(const Benchmark& bench);

}  // namespace urne

#endif  // URNE_BENCHMARK_H_
