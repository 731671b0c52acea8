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

#include "urne/simdecode.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

#include "urne/errors.h"
#include "urne/rng.h"
#include "urne/text.h"

namespace urne {

namespace {

int Levenshtein(const std::string& a, const std::string& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  std::vector<int> prev(m + 1);
  std::vector<int> row(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({sub, prev[j] + 1, row[j - 1] + 1});
    }
    std::swap(prev, row);
  }
  return prev[m];
}

}  // namespace

double NormalizedEditDistance(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 0.0;
  return static_cast<double>(Levenshtein(a, b)) /
         static_cast<double>(std::max(a.size(), b.size()));
}

double ConfusionModel::Score(const std::string& reference,
                             const std::string& word) const {
  if (reference == word) return self_score;
  auto it = alternatives.find(reference);
  if (it != alternatives.end()) {
    for (const ConfusionAlternative& alt : it->second) {
      if (alt.word == word) return alt.score;
    }
  }
  throw Error("not confusable: " + reference + " / " + word);
}

ConfusionModel BuildConfusionModel(const std::vector<std::string>& vocab,
                                   uint64_t seed,
                                   const ConfusionParams& params) {
  if (vocab.empty()) throw EmptyCorpus("empty confusion vocabulary");
  std::vector<std::string> words(vocab);
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());

  ConfusionModel model;
  for (size_t i = 0; i < words.size(); ++i) {
    for (size_t j = i + 1; j < words.size(); ++j) {
      const double ned = NormalizedEditDistance(words[i], words[j]);
      if (ned > params.ned_threshold) continue;
      Rng pair_rng(ChildSeed(seed, words[i] + "\t" + words[j]));
      const double noise =
          params.noise_scale * (2.0 * pair_rng.Uniform() - 1.0);
      const double score =
          std::min(-params.penalty * ned + noise, model.self_score - 0.01);
      model.alternatives[words[i]].push_back({words[j], score});
      model.alternatives[words[j]].push_back({words[i], score});
    }
  }
  for (auto& [word, alts] : model.alternatives) {
    std::sort(alts.begin(), alts.end(),
              [](const ConfusionAlternative& a, const ConfusionAlternative& b) {
                if (a.score != b.score) return a.score > b.score;
                return a.word < b.word;
              });
  }
  return model;
}

void WriteConfusionTsv(const ConfusionModel& model, std::ostream& out) {
  for (const auto& [word, alts] : model.alternatives) {
    for (const ConfusionAlternative& alt : alts) {
      out << word << "\t" << alt.word << "\t" << FormatFixed(alt.score, 6)
          << "\n";
    }
  }
}

void WriteConfusionTsvFile(const ConfusionModel& model,
                           const std::string& path,
                           const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteConfusionTsv(model, out);
}

namespace {

struct SlotCandidate {
  std::string word;
  double acoustic = 0.0;
};

std::vector<std::vector<SlotCandidate>> SlotCandidates(
    const std::vector<std::string>& reference, const ConfusionModel& confusion,
    int max_arcs_per_slot) {
  std::vector<std::vector<SlotCandidate>> slots;
  slots.reserve(reference.size());
  for (const std::string& word : reference) {
    std::vector<SlotCandidate> cands = {{word, confusion.self_score}};
    auto it = confusion.alternatives.find(word);
    if (it != confusion.alternatives.end()) {
      for (const ConfusionAlternative& alt : it->second) {
        if (static_cast<int>(cands.size()) >= max_arcs_per_slot) break;
        cands.push_back({alt.word, alt.score});
      }
    }
    slots.push_back(std::move(cands));
  }
  return slots;
}

}  // namespace

Lattice SimulateLattice(const std::vector<std::string>& reference,
                        const ConfusionModel& confusion, const NGramModel& lm,
                        const SimConfig& config) {
  if (reference.empty()) throw EmptyReference("empty reference");
  if (!(config.beam > 0.0)) throw ConfigError("beam must be positive");
  if (config.max_arcs_per_slot < 1) {
    throw ConfigError("max_arcs_per_slot must be at least 1");
  }

  const size_t m = reference.size();
  const auto slots = SlotCandidates(reference, confusion,
                                    config.max_arcs_per_slot);
  const size_t ctx = static_cast<size_t>(std::max(lm.order - 1, 0));
  auto truncate = [&](std::vector<std::string> h) {
    if (h.size() > ctx) h.erase(h.begin(), h.end() - ctx);
    return h;
  };
  auto step_score = [&](const std::vector<std::string>& history,
                        const SlotCandidate& cand) {
    return config.scales.acoustic_scale * cand.acoustic +
           config.scales.lm_scale * kLn10 * lm.LogProb(history, cand.word);
  };

  using History = std::vector<std::string>;
  const double kNegInf = -std::numeric_limits<double>::infinity();

  // Best score from the start into each state (scaled, end term excluded).
  std::vector<std::map<History, double>> alpha(m + 1);
  alpha[0][truncate({std::string(kSentenceBegin)})] = 0.0;
  for (size_t i = 0; i < m; ++i) {
    for (const auto& [history, score] : alpha[i]) {
      for (const SlotCandidate& cand : slots[i]) {
        History next = history;
        next.push_back(lm.InVocab(cand.word) ? cand.word
                                             : std::string(kUnknown));
        next = truncate(std::move(next));
        const double total = score + step_score(history, cand);
        auto [it, inserted] = alpha[i + 1].emplace(std::move(next), total);
        if (!inserted && total > it->second) it->second = total;
      }
    }
  }

  // Best completion of each state, sentence-end term included.
  std::vector<std::map<History, double>> beta(m + 1);
  for (const auto& [history, unused] : alpha[m]) {
    beta[m][history] =
        config.scales.lm_scale * kLn10 * lm.LogProb(history, kSentenceEnd);
  }
  for (size_t i = m; i-- > 0;) {
    for (const auto& [history, unused] : alpha[i]) {
      double best = kNegInf;
      for (const SlotCandidate& cand : slots[i]) {
        History next = history;
        next.push_back(lm.InVocab(cand.word) ? cand.word
                                             : std::string(kUnknown));
        next = truncate(std::move(next));
        best = std::max(best,
                        step_score(history, cand) + beta[i + 1].at(next));
      }
      beta[i][history] = best;
    }
  }

  double best_total = kNegInf;
  for (const auto& [history, score] : alpha[m]) {
    best_total = std::max(best_total, score + beta[m][history]);
  }

  // States on surviving hypotheses, then arcs between them.
  std::vector<std::set<History>> kept(m + 1);
  struct PendingArc {
    size_t slot;
    History from;
    History to;
    std::string word;
    double acoustic;
    double lm_score;
  };
  std::vector<PendingArc> pending;
  for (size_t i = 0; i < m; ++i) {
    for (const auto& [history, score] : alpha[i]) {
      for (const SlotCandidate& cand : slots[i]) {
        History next = history;
        next.push_back(lm.InVocab(cand.word) ? cand.word
                                             : std::string(kUnknown));
        next = truncate(std::move(next));
        const double through = score + step_score(history, cand) +
                               beta[i + 1].at(next);
        if (!(through + config.beam >= best_total)) continue;
        double lm_arc = kLn10 * lm.LogProb(history, cand.word);
        if (i + 1 == m) {
          lm_arc += kLn10 * lm.LogProb(next, kSentenceEnd);
        }
        kept[i].insert(history);
        kept[i + 1].insert(next);
        pending.push_back(
            {i, history, std::move(next), cand.word, cand.acoustic, lm_arc});
      }
    }
  }

  Lattice lattice;
  std::vector<std::map<History, int>> ids(m + 1);
  int next_id = 0;
  for (size_t i = 0; i <= m; ++i) {
    for (const History& history : kept[i]) ids[i][history] = next_id++;
  }
  lattice.num_nodes = next_id;
  for (const PendingArc& arc : pending) {
    lattice.arcs.push_back({ids[arc.slot].at(arc.from),
                            ids[arc.slot + 1].at(arc.to), arc.word,
                            arc.acoustic, arc.lm_score});
  }
  for (const auto& [history, id] : ids[m]) lattice.final_nodes.push_back(id);
  std::sort(lattice.final_nodes.begin(), lattice.final_nodes.end());
  // Arcs at the beam edge can rarely lose their continuation to rounding;
  // trimming keeps the connectivity invariant unconditional.
  return Connect(lattice);
}

}  // namespace urne
