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

#include "urne/metrics.h"

#include <algorithm>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "urne/errors.h"
#include "urne/text.h"

namespace urne {

namespace {

double Pct(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) /
                              static_cast<double>(den);
}

}  // namespace

AlignmentResult Align(const std::vector<std::string>& ref,
                      const std::vector<std::string>& hyp) {
  const size_t n = ref.size();
  const size_t m = hyp.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) cost[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) cost[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int up = cost[i - 1][j] + 1;     // deletion
      const int left = cost[i][j - 1] + 1;   // insertion
      cost[i][j] = std::min({diag, up, left});
    }
  }

  AlignmentResult result;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        cost[i][j] == cost[i - 1][j - 1]) {
      result.pairs.push_back({EditOp::kMatch, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && j > 0 && cost[i][j] == cost[i - 1][j - 1] + 1 &&
               ref[i - 1] != hyp[j - 1]) {
      result.pairs.push_back({EditOp::kSubstitution, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      result.pairs.push_back({EditOp::kDeletion, ref[i - 1], ""});
      --i;
    } else {
      result.pairs.push_back({EditOp::kInsertion, "", hyp[j - 1]});
      --j;
    }
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  for (const AlignedPair& pair : result.pairs) {
    switch (pair.op) {
      case EditOp::kMatch: ++result.matches; break;
      case EditOp::kSubstitution: ++result.substitutions; break;
      case EditOp::kDeletion: ++result.deletions; break;
      case EditOp::kInsertion: ++result.insertions; break;
    }
  }
  return result;
}

double NeWerResult::RarePct() const { return Pct(rare_errors, rare_total); }
double NeWerResult::AbsentPct() const {
  return Pct(absent_errors, absent_total);
}
double NeWerResult::AllPct() const {
  return Pct(rare_errors + absent_errors, rare_total + absent_total);
}

NeWerResult NeWer(const std::vector<AlignmentResult>& alignments,
                  const std::vector<NamedEntity>& inventory,
                  const CountThresholds& thresholds) {
  std::unordered_map<std::string, int64_t> count_of;
  for (const NamedEntity& ne : inventory) count_of[ne.surface] = ne.train_count;

  NeWerResult result;
  for (const AlignmentResult& alignment : alignments) {
    for (const AlignedPair& pair : alignment.pairs) {
      if (pair.op == EditOp::kInsertion) continue;
      auto it = count_of.find(pair.ref);
      if (it == count_of.end()) continue;
      const int64_t count = it->second;
      if (Classify(count, thresholds) == CountClass::kRichlyRepresented) {
        continue;
      }
      const bool error = pair.op != EditOp::kMatch;
      if (count == 0) {
        ++result.absent_total;
        if (error) ++result.absent_errors;
      } else {
        ++result.rare_total;
        if (error) ++result.rare_errors;
      }
    }
  }
  return result;
}

double OccurrenceResult::Pct() const { return urne::Pct(hits, total); }

OccurrenceResult UrNeOccurrence(const std::vector<Lattice>& lattices,
                                const std::vector<Utterance>& references,
                                const std::vector<NamedEntity>& inventory,
                                int64_t count_lo, int64_t count_hi) {
  std::unordered_map<std::string, const Lattice*> by_id;
  for (const Lattice& lattice : lattices) by_id[lattice.utterance_id] = &lattice;
  std::unordered_map<std::string, int64_t> count_of;
  for (const NamedEntity& ne : inventory) count_of[ne.surface] = ne.train_count;

  OccurrenceResult result;
  for (const Utterance& ref : references) {
    auto lattice_it = by_id.find(ref.id);
    if (lattice_it == by_id.end()) throw MissingLattice(ref.id);
    const Lattice& lattice = *lattice_it->second;
    std::unordered_set<std::string> labels;
    for (const Arc& arc : lattice.arcs) labels.insert(arc.word);
    for (const std::string& token : ref.tokens) {
      auto it = count_of.find(token);
      if (it == count_of.end()) continue;
      if (it->second < count_lo || it->second > count_hi) continue;
      ++result.total;
      if (labels.count(token)) ++result.hits;
    }
  }
  return result;
}

double CorpusStats::NeRatePct() const { return Pct(ne_tokens, tokens); }
double CorpusStats::OovRatePct() const { return Pct(oov_tokens, tokens); }

CorpusStats ComputeCorpusStats(
    const Corpus& corpus, const std::vector<NamedEntity>& inventory,
    const std::map<std::string, int64_t>& train_vocab) {
  std::unordered_set<std::string> surfaces;
  for (const NamedEntity& ne : inventory) surfaces.insert(ne.surface);

  CorpusStats stats;
  stats.utterances = static_cast<int64_t>(corpus.utterances.size());
  for (const Utterance& utt : corpus.utterances) {
    for (const std::string& token : utt.tokens) {
      ++stats.tokens;
      if (surfaces.count(token)) ++stats.ne_tokens;
      if (train_vocab.find(token) == train_vocab.end()) ++stats.oov_tokens;
    }
  }
  return stats;
}

double EvalReport::WerPct() const { return Pct(edit_errors, ref_tokens); }

EvalReport Evaluate(
    const std::vector<Utterance>& references,
    const std::map<std::string, std::vector<std::string>>& hypotheses,
    const std::vector<NamedEntity>& inventory,
    const CountThresholds& thresholds) {
  static const std::vector<std::string> kEmpty;
  std::vector<AlignmentResult> alignments;
  EvalReport report;
  for (const Utterance& ref : references) {
    auto it = hypotheses.find(ref.id);
    const std::vector<std::string>& hyp =
        it == hypotheses.end() ? kEmpty : it->second;
    AlignmentResult alignment = Align(ref.tokens, hyp);
    report.ref_tokens += static_cast<int64_t>(ref.tokens.size());
    report.edit_errors += alignment.EditCost();
    alignments.push_back(std::move(alignment));
  }
  if (report.ref_tokens == 0) {
    throw EmptyReference("references carry no tokens");
  }
  report.ne_wer = NeWer(alignments, inventory, thresholds);
  return report;
}

void WriteReportText(const EvalReport& report, std::ostream& out) {
  out << "WER:            " << FormatFixed(report.WerPct(), 2) << "% ("
      << report.edit_errors << "/" << report.ref_tokens << ")\n";
  out << "NE-WER rare:    " << FormatFixed(report.ne_wer.RarePct(), 2) << "% ("
      << report.ne_wer.rare_errors << "/" << report.ne_wer.rare_total << ")\n";
  out << "NE-WER absent:  " << FormatFixed(report.ne_wer.AbsentPct(), 2)
      << "% (" << report.ne_wer.absent_errors << "/"
      << report.ne_wer.absent_total << ")\n";
  out << "NE-WER all:     " << FormatFixed(report.ne_wer.AllPct(), 2) << "% ("
      << report.ne_wer.rare_errors + report.ne_wer.absent_errors << "/"
      << report.ne_wer.rare_total + report.ne_wer.absent_total << ")\n";
  if (report.has_occurrence) {
    out << "UR-NE in lattice: " << FormatFixed(report.occurrence.Pct(), 2)
        << "% (" << report.occurrence.hits << "/" << report.occurrence.total
        << ")\n";
  }
}

void WriteReportTsv(const EvalReport& report, std::ostream& out) {
  out << "metric\tvalue\tnumerator\tdenominator\n";
  out << "wer\t" << FormatFixed(report.WerPct(), 4) << "\t"
      << report.edit_errors << "\t" << report.ref_tokens << "\n";
  out << "ne_wer_rare\t" << FormatFixed(report.ne_wer.RarePct(), 4) << "\t"
      << report.ne_wer.rare_errors << "\t" << report.ne_wer.rare_total << "\n";
  out << "ne_wer_absent\t" << FormatFixed(report.ne_wer.AbsentPct(), 4) << "\t"
      << report.ne_wer.absent_errors << "\t" << report.ne_wer.absent_total
      << "\n";
  out << "ne_wer_all\t" << FormatFixed(report.ne_wer.AllPct(), 4) << "\t"
      << report.ne_wer.rare_errors + report.ne_wer.absent_errors << "\t"
      << report.ne_wer.rare_total + report.ne_wer.absent_total << "\n";
  if (report.has_occurrence) {
    out << "ur_ne_occurrence\t" << FormatFixed(report.occurrence.Pct(), 4)
        << "\t" << report.occurrence.hits << "\t" << report.occurrence.total
        << "\n";
  }
}

}  // namespace urne
