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

#include "urne/exemplar.h"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "urne/errors.h"
#include "urne/rng.h"
#include "urne/text.h"

namespace urne {

namespace {

void CheckConfig(const ExemplarConfig& config) {
  if (config.num_rr_nes < 1 || config.utts_per_rr_ne < 1 ||
      config.exemplars_per_ur_ne < 1 || config.ur_boost_max_count < 0) {
    throw ConfigError("exemplar config values out of range");
  }
}

}  // namespace

size_t ExemplarPool::TotalEntries() const {
  size_t total = 0;
  for (const auto& [category, entries] : entries_by_category) {
    (void)category;
    total += entries.size();
  }
  return total;
}

ExemplarPool BuildPool(const Corpus& corpus,
                       const std::vector<NamedEntity>& inventory,
                       const NeUtteranceIndex& index,
                       const ExemplarConfig& config) {
  CheckConfig(config);
  std::unordered_map<std::string, const Utterance*> by_id;
  for (const Utterance& utt : corpus.utterances) by_id[utt.id] = &utt;
  std::unordered_map<std::string, NeCategory> category_of;
  for (const NamedEntity& ne : inventory) category_of[ne.surface] = ne.category;

  // Candidates ordered by (category, surface); the index keeps both sorted.
  std::vector<std::string> candidates;
  for (const auto& [category, surfaces] : index.rr_nes_by_category) {
    (void)category;
    for (const std::string& surface : surfaces) {
      auto it = index.utterances_by_ne.find(surface);
      if (it != index.utterances_by_ne.end() && !it->second.empty()) {
        candidates.push_back(surface);
      }
    }
  }
  if (candidates.empty()) {
    throw NoRrNes("no richly represented entity has indexed utterances");
  }

  Rng rng(config.rng_seed);
  std::vector<std::string> selected = rng.SampleWithoutReplacement(
      candidates, std::min<size_t>(config.num_rr_nes, candidates.size()));

  ExemplarPool pool;
  for (const std::string& surface : selected) {
    const std::vector<std::string>& utt_ids = index.utterances_by_ne.at(surface);
    std::vector<std::string> chosen;
    if (utt_ids.size() <= static_cast<size_t>(config.utts_per_rr_ne)) {
      chosen = utt_ids;
    } else {
      Rng utt_rng(ChildSeed(config.rng_seed, "pool-" + surface));
      chosen = utt_rng.SampleWithoutReplacement(
          utt_ids, static_cast<size_t>(config.utts_per_rr_ne));
    }
    auto& entries = pool.entries_by_category[category_of.at(surface)];
    for (const std::string& utt_id : chosen) {
      const Utterance& utt = *by_id.at(utt_id);
      for (size_t pos = 0; pos < utt.tokens.size(); ++pos) {
        if (utt.tokens[pos] != surface) continue;
        PoolEntry entry;
        entry.source_id = utt.id;
        entry.tokens = utt.tokens;
        entry.position = static_cast<int>(pos);
        entry.rr_surface = surface;
        entries.push_back(entry);
      }
    }
    pool.selected_rr_nes.emplace_back(surface, static_cast<int>(chosen.size()));
  }
  return pool;
}

std::vector<Exemplar> GenerateExemplarRecords(const NamedEntity& ur_ne,
                                              const ExemplarPool& pool,
                                              const ExemplarConfig& config) {
  CheckConfig(config);
  std::vector<Exemplar> records;
  auto it = pool.entries_by_category.find(ur_ne.category);
  if (it == pool.entries_by_category.end() || it->second.empty()) {
    return records;
  }
  const std::vector<PoolEntry>& entries = it->second;
  std::vector<size_t> indices(entries.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Rng rng(ChildSeed(config.rng_seed, "exemplar-" + ur_ne.surface));
  const size_t want = std::min<size_t>(config.exemplars_per_ur_ne,
                                       indices.size());
  std::vector<size_t> picked = rng.SampleWithoutReplacement(indices, want);
  for (size_t k = 0; k < picked.size(); ++k) {
    const PoolEntry& entry = entries[picked[k]];
    Exemplar exemplar;
    exemplar.id = "exemplar-" + ur_ne.surface + "-" + std::to_string(k + 1);
    exemplar.tokens = entry.tokens;
    exemplar.tokens[entry.position] = ur_ne.surface;
    exemplar.source_id = entry.source_id;
    exemplar.rr_surface = entry.rr_surface;
    exemplar.ur_surface = ur_ne.surface;
    records.push_back(std::move(exemplar));
  }
  return records;
}

std::vector<std::vector<std::string>> GenerateExemplars(
    const NamedEntity& ur_ne, const ExemplarPool& pool,
    const ExemplarConfig& config) {
  std::vector<std::vector<std::string>> sequences;
  for (Exemplar& record : GenerateExemplarRecords(ur_ne, pool, config)) {
    sequences.push_back(std::move(record.tokens));
  }
  return sequences;
}

Corpus AugmentCorpus(const Corpus& corpus,
                     const std::vector<NamedEntity>& inventory,
                     const ExemplarPool& pool, const ExemplarConfig& config,
                     std::vector<Exemplar>* records) {
  const CountThresholds thresholds;
  Corpus augmented = corpus;
  for (const NamedEntity& ne : inventory) {
    if (ne.train_count > config.ur_boost_max_count) continue;
    if (Classify(ne, thresholds) == CountClass::kRichlyRepresented) continue;
    for (Exemplar& exemplar : GenerateExemplarRecords(ne, pool, config)) {
      augmented.utterances.push_back({exemplar.id, exemplar.tokens});
      if (records != nullptr) records->push_back(std::move(exemplar));
    }
  }
  RecountVocabulary(&augmented);
  return augmented;
}

void WriteExemplarProvenance(const std::vector<Exemplar>& records,
                             std::ostream& out) {
  for (const Exemplar& record : records) {
    out << record.id << "\t" << record.ur_surface << "\t" << record.source_id
        << "\t" << record.rr_surface << "\n";
  }
}

void WriteExemplarProvenanceFile(const std::vector<Exemplar>& records,
                                 const std::string& path,
                                 const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteExemplarProvenance(records, out);
}

}  // namespace urne
