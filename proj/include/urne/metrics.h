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

#ifndef URNE_METRICS_H_
#define URNE_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "urne/corpus.h"
#include "urne/lattice.h"

namespace urne {

// WER, entity-bucketed WER, and lattice occurrence rates.

enum class EditOp { kMatch, kSubstitution, kDeletion, kInsertion };

struct AlignedPair {
  EditOp op;
  std::string ref;  // empty for insertions
  std::string hyp;  // empty for deletions
};

struct AlignmentResult {
  std::vector<AlignedPair> pairs;
  int matches = 0;
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;

  int EditCost() const { return substitutions + deletions + insertions; }
};

// Minimum-edit-distance alignment with unit costs. Ties resolve in favor of
// match, then substitution, then deletion, then insertion.
AlignmentResult Align(const std::vector<std::string>& ref,
                      const std::vector<std::string>& hyp);

// Error rates over reference entity tokens, bucketed by training count:
// absent = count 0, rare = [1, ur_max]. Richly represented entities are not
// scored here. A reference entity token counts as an error whenever its
// aligned op is not a match. Empty buckets report 0.
struct NeWerResult {
  int64_t rare_errors = 0;
  int64_t rare_total = 0;
  int64_t absent_errors = 0;
  int64_t absent_total = 0;

  double RarePct() const;
  double AbsentPct() const;
  double AllPct() const;  // micro-average over both buckets
};

NeWerResult NeWer(const std::vector<AlignmentResult>& alignments,
                  const std::vector<NamedEntity>& inventory,
                  const CountThresholds& thresholds = {});

// Share of reference entity tokens with training count in [count_lo,
// count_hi] whose word occurs as an arc label anywhere in that utterance's
// lattice. Lattices and references pair up by utterance id; a reference
// without a lattice raises MissingLattice.
struct OccurrenceResult {
  int64_t hits = 0;
  int64_t total = 0;

  double Pct() const;
};

OccurrenceResult UrNeOccurrence(const std::vector<Lattice>& lattices,
                                const std::vector<Utterance>& references,
                                const std::vector<NamedEntity>& inventory,
                                int64_t count_lo, int64_t count_hi);

// Token-level rates behind the corpus summary table.
struct CorpusStats {
  int64_t utterances = 0;
  int64_t tokens = 0;
  int64_t ne_tokens = 0;
  int64_t oov_tokens = 0;

  double NeRatePct() const;
  double OovRatePct() const;
};

CorpusStats ComputeCorpusStats(const Corpus& corpus,
                               const std::vector<NamedEntity>& inventory,
                               const std::map<std::string, int64_t>& train_vocab);

struct EvalReport {
  int64_t ref_tokens = 0;
  int64_t edit_errors = 0;  // substitutions + deletions + insertions
  NeWerResult ne_wer;
  bool has_occurrence = false;
  OccurrenceResult occurrence;

  double WerPct() const;
};

// Aligns every reference against the hypothesis with the same utterance id
// (missing hypotheses score as empty, i.e. all deletions) and accumulates
// WER plus entity buckets. Throws EmptyReference when references carry no
// tokens at all.
EvalReport Evaluate(
    const std::vector<Utterance>& references,
    const std::map<std::string, std::vector<std::string>>& hypotheses,
    const std::vector<NamedEntity>& inventory,
    const CountThresholds& thresholds = {});

void WriteReportText(const EvalReport& report, std::ostream& out);
void WriteReportTsv(const EvalReport& report, std::ostream& out);

}  // namespace urne

#endif  // URNE_METRICS_H_
