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

#ifndef URNE_EXEMPLAR_H_
#define URNE_EXEMPLAR_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "urne/corpus.h"

namespace urne {

// Exemplar generation: take utterances that contain a richly represented
// named entity and substitute an under-represented entity of the same
// category at the entity position, then merge the results into the LM
// training corpus.

struct PoolEntry {
  std::string source_id;
  std::vector<std::string> tokens;
  int position = 0;         // index of the entity token inside tokens
  std::string rr_surface;   // tokens[position] == rr_surface
};

struct ExemplarPool {
  std::map<NeCategory, std::vector<PoolEntry>> entries_by_category;
  // Which entities seeded the pool and how many utterances each contributed.
  std::vector<std::pair<std::string, int>> selected_rr_nes;

  size_t TotalEntries() const;
};

struct ExemplarConfig {
  int num_rr_nes = 20;
  int utts_per_rr_ne = 30;
  int exemplars_per_ur_ne = 10;
  int ur_boost_max_count = 1;
  uint64_t rng_seed = 0;
};

struct Exemplar {
  std::string id;           // exemplar-<ne>-<k>
  std::vector<std::string> tokens;
  std::string source_id;
  std::string rr_surface;
  std::string ur_surface;
};

// Seeded-random selection of entities, then up to utts_per_rr_ne source
// utterances per entity (all of them when fewer exist). Utterances holding
// the entity more than once contribute one entry per occurrence.
// Throws NoRrNes when the index holds no usable entity.
ExemplarPool BuildPool(const Corpus& corpus,
                       const std::vector<NamedEntity>& inventory,
                       const NeUtteranceIndex& index,
                       const ExemplarConfig& config);

// Up to exemplars_per_ur_ne sequences drawn without replacement from the
// pool slice matching ur_ne's category, each with the entity token swapped
// for ur_ne.surface. An empty category slice yields an empty list.
std::vector<std::vector<std::string>> GenerateExemplars(
    const NamedEntity& ur_ne, const ExemplarPool& pool,
    const ExemplarConfig& config);

// Same sampling as GenerateExemplars but with provenance attached.
std::vector<Exemplar> GenerateExemplarRecords(const NamedEntity& ur_ne,
                                              const ExemplarPool& pool,
                                              const ExemplarConfig& config);

// Original corpus plus exemplars for every inventory entity whose training
// count is at most ur_boost_max_count (and is not richly represented).
// Fills *records with the provenance of everything appended when non-null.
Corpus AugmentCorpus(const Corpus& corpus,
                     const std::vector<NamedEntity>& inventory,
                     const ExemplarPool& pool, const ExemplarConfig& config,
                     std::vector<Exemplar>* records = nullptr);

// Audit sidecar: one TSV row per exemplar.
void WriteExemplarProvenance(const std::vector<Exemplar>& records,
                             std::ostream& out);
void WriteExemplarProvenanceFile(const std::vector<Exemplar>& records,
                                 const std::string& path,
                                 const std::string& header = "");

}  // namespace urne

#endif  // URNE_EXEMPLAR_H_
