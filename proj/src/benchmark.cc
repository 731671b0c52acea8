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

#include "urne/benchmark.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "urne/errors.h"
#include "urne/rng.h"
#include "urne/text.h"

namespace urne {

namespace {

const char kSlot[] = "X";
const char kConsonants[] = "bdfgklmnprstvz";
const char kVowels[] = "aeiou";

const std::vector<std::string>& FillerNouns() {
  static const std::vector<std::string> kNouns = {
      "market", "school",  "office",  "garden",
      "harbor", "museum", "station", "library"};
  return kNouns;
}

int EditDistance(const std::string& a, const std::string& b) {
  std::vector<int> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int next = std::min({row[j] + 1, row[j - 1] + 1,
                           diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = row[j];
      row[j] = next;
    }
  }
  return row[b.size()];
}

std::string RandomSurface(Rng* rng) {
  std::string word;
  for (int s = 0; s < 3; ++s) {
    word += kConsonants[rng->UniformInt(0, 13)];
    word += kVowels[rng->UniformInt(0, 4)];
  }
  return word;
}

// One in-class character swap: the mutant stays one edit from its parent and
// keeps the consonant-vowel shape.
std::string MutateSurface(const std::string& parent, Rng* rng) {
  std::string word = parent;
  int pos = static_cast<int>(rng->UniformInt(0, static_cast<int64_t>(word.size()) - 1));
  const char* pool = (pos % 2 == 0) ? kConsonants : kVowels;
  int span = (pos % 2 == 0) ? 14 : 5;
  char c;
  do {
    c = pool[rng->UniformInt(0, span - 1)];
  } while (c == word[pos]);
  word[pos] = c;
  return word;
}

bool FarFromAll(const std::string& word, const std::vector<std::string>& others,
                int min_dist) {
  for (const std::string& other : others) {
    if (EditDistance(word, other) < min_dist) return false;
  }
  return true;
}

std::vector<std::string> BaseWords() {
  std::set<std::string> words;
  for (const std::vector<std::string>& tpl : BenchmarkTemplates()) {
    for (const std::string& token : tpl) {
      if (token != kSlot) words.insert(token);
    }
  }
  for (const std::string& noun : FillerNouns()) words.insert(noun);
  return std::vector<std::string>(words.begin(), words.end());
}

std::vector<std::string> Instantiate(const std::vector<std::string>& tpl,
                                     const std::string& surface) {
  std::vector<std::string> tokens = tpl;
  for (std::string& token : tokens) {
    if (token == kSlot) token = surface;
  }
  return tokens;
}

struct EntityPlan {
  std::string surface;
  NeCategory category;
  int train_count = 0;
  std::vector<int64_t> templates;  // template indices this entity cycles over
};

void CheckConfig(const BenchmarkConfig& config) {
  int num_templates = static_cast<int>(BenchmarkTemplates().size());
  if (config.rr_per_category < 1) throw ConfigError("rr_per_category must be >= 1");
  if (config.ur_per_category < 1) throw ConfigError("ur_per_category must be >= 1");
  if (config.train_utts_per_rr_ne < 1) {
    throw ConfigError("train_utts_per_rr_ne must be >= 1");
  }
  if (config.test_utts_per_ur_ne < 1) {
    throw ConfigError("test_utts_per_ur_ne must be >= 1");
  }
  if (config.templates_per_ne < 1 || config.templates_per_ne > num_templates) {
    throw ConfigError("templates_per_ne must be in [1, " +
                      std::to_string(num_templates) + "]");
  }
  if (config.filler_test_utts < 0) {
    throw ConfigError("filler_test_utts must be >= 0");
  }
}

std::vector<int64_t> PickTemplates(const std::string& surface, int count,
                                   uint64_t seed) {
  int num_templates = static_cast<int>(BenchmarkTemplates().size());
  std::vector<int64_t> all(num_templates);
  for (int i = 0; i < num_templates; ++i) all[i] = i;
  Rng rng(ChildSeed(seed, "tpl-" + surface));
  std::vector<int64_t> picked =
      rng.SampleWithoutReplacement(all, static_cast<size_t>(count));
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

const std::vector<std::vector<std::string>>& BenchmarkTemplates() {
  static const std::vector<std::vector<std::string>> kTemplates = {
      {"go", "to", "X", "now"},
      {"meet", "us", "at", "X"},
      {"we", "visited", "X", "yesterday"},
      {"the", "road", "near", "X", "is", "closed"},
      {"take", "the", "bus", "to", "X"},
      {"she", "lives", "close", "to", "X"},
      {"they", "talked", "about", "X", "today"},
      {"i", "saw", "X", "on", "the", "map"},
      {"X", "was", "mentioned", "again"},
      {"many", "people", "like", "X"},
  };
  return kTemplates;
}

Benchmark MakeBenchmark(const BenchmarkConfig& config) {
  CheckConfig(config);
  const std::vector<std::vector<std::string>>& templates = BenchmarkTemplates();
  const std::vector<std::string> base = BaseWords();
  // Rare entities cycle through these training counts; the first two stay
  // absent from the training text entirely.
  static const int kUrCounts[] = {0, 0, 1, 2, 5, 9};
  constexpr int kMaxAttempts = 100000;

  std::vector<NeCategory> categories = {
      NeCategory::kLocation,     NeCategory::kPerson,  NeCategory::kCountry,
      NeCategory::kCompany,      NeCategory::kOrganization,
      NeCategory::kCity};

  // Surfaces keep pairwise edit distance >= 2 (and distance >= 2 from every
  // carrier word) except for the single mutated position, so each rare
  // entity has exactly one distance-1 competitor: its parent.
  std::vector<std::string> surfaces;
  std::vector<std::vector<std::string>> rr_by_category(categories.size());
  std::vector<EntityPlan> rr_plans;
  std::vector<EntityPlan> ur_plans;

  for (size_t ci = 0; ci < categories.size(); ++ci) {
    Rng rng(ChildSeed(config.seed,
                      std::string("rr-") + CategoryName(categories[ci])));
    for (int i = 0; i < config.rr_per_category; ++i) {
      std::string word;
      int attempts = 0;
      do {
        if (++attempts > kMaxAttempts) {
          throw Error("benchmark surface generation stalled");
        }
        word = RandomSurface(&rng);
      } while (!FarFromAll(word, surfaces, 2) || !FarFromAll(word, base, 2));
      surfaces.push_back(word);
      rr_by_category[ci].push_back(word);
      EntityPlan plan;
      plan.surface = word;
      plan.category = categories[ci];
      plan.train_count = config.train_utts_per_rr_ne;
      rr_plans.push_back(plan);
    }
  }

  for (size_t ci = 0; ci < categories.size(); ++ci) {
    Rng rng(ChildSeed(config.seed,
                      std::string("ur-") + CategoryName(categories[ci])));
    for (int i = 0; i < config.ur_per_category; ++i) {
      const std::string& parent =
          rr_by_category[ci][i % rr_by_category[ci].size()];
      std::string word;
      int attempts = 0;
      bool ok = false;
      do {
        if (++attempts > kMaxAttempts) {
          throw Error("benchmark surface generation stalled");
        }
        word = MutateSurface(parent, &rng);
        ok = FarFromAll(word, base, 2);
        for (const std::string& other : surfaces) {
          if (!ok) break;
          if (other == parent) continue;
          if (EditDistance(word, other) < 2) ok = false;
        }
      } while (!ok);
      surfaces.push_back(word);
      EntityPlan plan;
      plan.surface = word;
      plan.category = categories[ci];
      plan.train_count = kUrCounts[i % 6];
      ur_plans.push_back(plan);
    }
  }

  for (EntityPlan& plan : rr_plans) {
    plan.templates =
        PickTemplates(plan.surface, config.templates_per_ne, config.seed);
  }
  for (EntityPlan& plan : ur_plans) {
    plan.templates =
        PickTemplates(plan.surface, config.templates_per_ne, config.seed);
  }

  Benchmark bench;
  for (const EntityPlan& plan : rr_plans) {
    for (int j = 0; j < plan.train_count; ++j) {
      Utterance utt;
      utt.id = "train-" + plan.surface + "-" + std::to_string(j);
      utt.tokens = Instantiate(
          templates[plan.templates[j % plan.templates.size()]], plan.surface);
      bench.train.utterances.push_back(utt);
    }
  }
  for (const EntityPlan& plan : ur_plans) {
    for (int j = 0; j < plan.train_count; ++j) {
      Utterance utt;
      utt.id = "train-" + plan.surface + "-" + std::to_string(j);
      utt.tokens = Instantiate(
          templates[plan.templates[j % plan.templates.size()]], plan.surface);
      bench.train.utterances.push_back(utt);
    }
  }
  for (const std::string& noun : FillerNouns()) {
    for (size_t t = 0; t < templates.size(); ++t) {
      Utterance utt;
      utt.id = "train-filler-" + noun + "-" + std::to_string(t);
      utt.tokens = Instantiate(templates[t], noun);
      bench.train.utterances.push_back(utt);
    }
  }
  RecountVocabulary(&bench.train);

  int num_templates = static_cast<int>(templates.size());
  for (const EntityPlan& plan : ur_plans) {
    Rng rng(ChildSeed(config.seed, "test-" + plan.surface));
    for (int k = 0; k < config.test_utts_per_ur_ne; ++k) {
      Utterance utt;
      utt.id = "test-" + plan.surface + "-" + std::to_string(k);
      utt.tokens = Instantiate(
          templates[rng.UniformInt(0, num_templates - 1)], plan.surface);
      bench.test.utterances.push_back(utt);
    }
  }
  {
    Rng rng(ChildSeed(config.seed, "test-filler"));
    const std::vector<std::string>& nouns = FillerNouns();
    for (int i = 0; i < config.filler_test_utts; ++i) {
      Utterance utt;
      utt.id = "test-filler-" + std::to_string(i);
      const std::string& noun =
          nouns[rng.UniformInt(0, static_cast<int64_t>(nouns.size()) - 1)];
      utt.tokens = Instantiate(
          templates[rng.UniformInt(0, num_templates - 1)], noun);
      bench.test.utterances.push_back(utt);
    }
  }
  RecountVocabulary(&bench.test);

  for (const EntityPlan& plan : rr_plans) {
    NamedEntity ne;
    ne.surface = plan.surface;
    ne.category = plan.category;
    ne.train_count = bench.train.TokenCount(plan.surface);
    bench.inventory.push_back(ne);
  }
  for (const EntityPlan& plan : ur_plans) {
    NamedEntity ne;
    ne.surface = plan.surface;
    ne.category = plan.category;
    ne.train_count = bench.train.TokenCount(plan.surface);
    bench.inventory.push_back(ne);
  }
  return bench;
}

void WriteBenchmarkFiles(const Benchmark& bench, const std::string& dir,
                         const std::string& header) {
  WriteCorpusFile(bench.train, dir + "/train.txt", header);
  WriteCorpusFile(bench.test, dir + "/test.txt", header);
  std::ofstream out(dir + "/inventory.tsv");
  if (!out) throw Error("cannot write NE inventory file: " + dir + "/inventory.tsv");
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteNeInventory(bench.inventory, out);
}

Benchmark LoadBenchmarkFiles(const std::string& dir) {
  Benchmark bench;
  bench.train = LoadCorpusFile(dir + "/train.txt");
  bench.test = LoadCorpusFile(dir + "/test.txt");
  bench.inventory = LoadNeInventoryFile(dir + "/inventory.tsv", bench.train);
  return bench;
}

std::vector<std::string> ConfusionVocabulary(const Benchmark& bench) {
  std::set<std::string> words;
  for (const auto& [word, count] : bench.train.vocabulary) words.insert(word);
  for (const auto& [word, count] : bench.test.vocabulary) words.insert(word);
  for (const NamedEntity& ne : bench.inventory) words.insert(ne.surface);
  return std::vector<std::string>(words.begin(), words.end());
}

}  // namespace urne
