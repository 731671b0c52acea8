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

#ifndef URNE_SIMDECODE_H_
#define URNE_SIMDECODE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "urne/lattice.h"
#include "urne/ngram.h"

namespace urne {

// Synthetic acoustic confusability from grapheme edit distance. Words within
// normalized edit distance ned_threshold are mutually confusable with
// log-score -penalty * ned plus seeded symmetric noise, clamped below the
// self score of 0.

struct ConfusionParams {
  double ned_threshold = 0.5;
  double penalty = 8.0;
  double noise_scale = 0.3;
};

struct ConfusionAlternative {
  std::string word;
  double score = 0.0;  // strictly below the self score
};

struct ConfusionModel {
  double self_score = 0.0;
  // Per word, confusable alternatives sorted by score descending, then word.
  std::map<std::string, std::vector<ConfusionAlternative>> alternatives;

  // Acoustic log-score of producing word when reference is the truth.
  // Throws Error for pairs that are not confusable.
  double Score(const std::string& reference, const std::string& word) const;
};

// Normalized grapheme edit distance: levenshtein(a, b) / max(|a|, |b|).
double NormalizedEditDistance(const std::string& a, const std::string& b);

// All-pairs confusability over the vocabulary. Scores are symmetric and
// deterministic in the seed. Throws EmptyCorpus on an empty vocabulary.
ConfusionModel BuildConfusionModel(const std::vector<std::string>& vocab,
                                   uint64_t seed,
                                   const ConfusionParams& params = {});

// TSV dump, one `word<TAB>alternative<TAB>score` row per pair.
void WriteConfusionTsv(const ConfusionModel& model, std::ostream& out);
void WriteConfusionTsvFile(const ConfusionModel& model,
                           const std::string& path,
                           const std::string& header = "");

struct SimConfig {
  double beam = 4.0;          // > 0; may be infinite
  int max_arcs_per_slot = 6;  // reference word plus top alternatives
  ScaleConfig scales;
};

// Position-synchronous beam decode of one reference transcript. Slot i
// offers the reference word plus its confusable alternatives; hypotheses
// are scored by scaled acoustic + LM (natural log, sentence-end folded into
// the last slot's arcs) and a complete hypothesis survives when its total
// lies within beam of the best. Emitted arcs are exactly those on surviving
// hypotheses, so the lattice is connected and acyclic, the best path always
// survives, and the arc set grows monotonically with the beam.
// Throws EmptyReference, ConfigError.
Lattice SimulateLattice(const std::vector<std::string>& reference,
                        const ConfusionModel& confusion, const NGramModel& lm,
                        const SimConfig& config);

}  // namespace urne

#endif  // URNE_SIMDECODE_H_
