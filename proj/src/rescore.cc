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

#include "urne/rescore.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "urne/errors.h"
#include "urne/text.h"

namespace urne {

Lattice ReplaceLmScores(const Lattice& lattice, const NGramModel& model) {
  if (lattice.arcs.empty()) throw EmptyLattice(lattice.utterance_id);
  const std::vector<int> topo = TopoOrder(lattice);
  const auto out_arcs = OutgoingArcs(lattice);
  const size_t ctx = static_cast<size_t>(std::max(model.order - 1, 0));

  auto truncate = [&](std::vector<std::string> h) {
    if (h.size() > ctx) h.erase(h.begin(), h.end() - ctx);
    return h;
  };

  struct StateIds {
    int cont = -1;
    int stop = -1;
  };
  std::vector<std::map<std::vector<std::string>, StateIds>> states(
      lattice.num_nodes);

  Lattice expanded;
  expanded.utterance_id = lattice.utterance_id;
  int next_id = 0;

  const std::vector<std::string> start_history =
      truncate({std::string(kSentenceBegin)});
  states[0][start_history].cont = next_id++;
  if (lattice.IsFinal(0)) {
    expanded.final_nodes.push_back(states[0][start_history].cont);
  }

  for (int u : topo) {
    for (const auto& [history, ids] : states[u]) {
      if (ids.cont < 0) continue;
      for (int ai : out_arcs[u]) {
        const Arc& arc = lattice.arcs[ai];
        const double lm_word = kLn10 * model.LogProb(history, arc.word);
        std::vector<std::string> next_history = history;
        next_history.push_back(model.InVocab(arc.word)
                                   ? arc.word
                                   : std::string(kUnknown));
        next_history = truncate(std::move(next_history));
        StateIds& dest = states[arc.to][next_history];
        if (!out_arcs[arc.to].empty() || !lattice.IsFinal(arc.to)) {
          if (dest.cont < 0) dest.cont = next_id++;
          expanded.arcs.push_back(
              {ids.cont, dest.cont, arc.word, arc.acoustic, lm_word});
        }
        if (lattice.IsFinal(arc.to)) {
          if (dest.stop < 0) {
            dest.stop = next_id++;
            expanded.final_nodes.push_back(dest.stop);
          }
          const double lm_stop =
              lm_word + kLn10 * model.LogProb(next_history, kSentenceEnd);
          expanded.arcs.push_back(
              {ids.cont, dest.stop, arc.word, arc.acoustic, lm_stop});
        }
      }
    }
  }
  expanded.num_nodes = next_id;
  std::sort(expanded.final_nodes.begin(), expanded.final_nodes.end());
  return expanded;
}

namespace {

void CheckRescoreConfig(const RescoreConfig& config) {
  if (config.nbest_n < 1) throw ConfigError("nbest_n must be at least 1");
  if (!(0.0 <= config.neural_interp_lambda &&
        config.neural_interp_lambda <= 1.0)) {
    throw ConfigError("neural_interp_lambda must lie in [0, 1]");
  }
}

}  // namespace

std::vector<RescoredPath> NBestNeuralRescore(const Lattice& lattice,
                                             const RnnLmModel& rnn,
                                             const RescoreConfig& config) {
  CheckRescoreConfig(config);
  const std::vector<Path> paths = NBest(lattice, config.nbest_n, config.scales);
  const double lambda = config.neural_interp_lambda;
  std::vector<RescoredPath> rescored;
  rescored.reserve(paths.size());
  for (const Path& path : paths) {
    RescoredPath entry;
    entry.path = path;
    entry.neural_logprob = RnnSentenceLogProb(rnn, path.words);
    entry.combined_score =
        config.scales.acoustic_scale * path.acoustic_total +
        config.scales.lm_scale * ((1.0 - lambda) * path.lm_total +
                                  lambda * entry.neural_logprob);
    rescored.push_back(std::move(entry));
  }
  std::stable_sort(rescored.begin(), rescored.end(),
                   [](const RescoredPath& a, const RescoredPath& b) {
                     return a.combined_score > b.combined_score;
                   });
  return rescored;
}

BiasedPathResult NeBiasedBestPath(const Lattice& lattice,
                                  const std::set<std::string>& keywords,
                                  const ScaleConfig& scales) {
  BiasedPathResult result;
  result.path = BestPath(lattice, scales);
  const std::vector<KeywordMatch> matches =
      FindKeywords(lattice, keywords, scales);
  if (matches.empty()) return result;

  const KeywordMatch* best = &matches[0];
  for (const KeywordMatch& match : matches) {
    if (match.best_path_score > best->best_path_score) best = &match;
  }
  const auto prefixes = ViterbiPrefixes(lattice, scales);
  const auto suffixes = ViterbiSuffixes(lattice, scales);
  const Arc& arc = lattice.arcs[best->arc_index];
  std::vector<int> arc_indices = prefixes[arc.from].arcs;
  arc_indices.push_back(best->arc_index);
  arc_indices.insert(arc_indices.end(), suffixes[arc.to].arcs.begin(),
                     suffixes[arc.to].arcs.end());
  result.path = MakePath(lattice, arc_indices, scales);
  result.boosted = true;
  return result;
}

const std::string& StageName(PipelineStage stage) {
  static const std::string kNames[] = {"ngram_swap", "neural_rescore",
                                       "neural_enriched_rescore",
                                       "lattice_boost"};
  return kNames[static_cast<int>(stage)];
}

std::vector<PipelineStage> ParseStagePlan(const std::string& text) {
  std::vector<PipelineStage> plan;
  if (text.empty()) return plan;
  for (const std::string& name : SplitChar(text, ',')) {
    bool known = false;
    for (PipelineStage stage :
         {PipelineStage::kNgramSwap, PipelineStage::kNeuralRescore,
          PipelineStage::kNeuralEnrichedRescore,
          PipelineStage::kLatticeBoost}) {
      if (name != StageName(stage)) continue;
      if (std::find(plan.begin(), plan.end(), stage) != plan.end()) {
        throw ConfigError("repeated stage: " + name);
      }
      plan.push_back(stage);
      known = true;
      break;
    }
    if (!known) throw ConfigError("unknown stage: " + name);
  }
  return plan;
}

namespace {

bool ContainsKeyword(const std::vector<std::string>& tokens,
                     const std::set<std::string>& keywords) {
  for (const std::string& token : tokens) {
    if (keywords.count(token) > 0) return true;
  }
  return false;
}

}  // namespace

bool LatticeBoost(const Lattice& lattice, const std::set<std::string>& keywords,
                  const ScaleConfig& scales, Hypothesis* hypothesis) {
  const BiasedPathResult biased = NeBiasedBestPath(lattice, keywords, scales);
  if (!biased.boosted || ContainsKeyword(hypothesis->tokens, keywords)) {
    return false;
  }
  hypothesis->tokens = biased.path.words;
  hypothesis->boosted = true;
  return true;
}

std::vector<Hypothesis> RunPipeline(const std::vector<Lattice>& lattices,
                                    const std::vector<PipelineStage>& plan,
                                    const PipelineModels& models,
                                    const std::set<std::string>& keywords,
                                    const RescoreConfig& config) {
  CheckRescoreConfig(config);
  for (PipelineStage stage : plan) {
    if (stage == PipelineStage::kNgramSwap && models.ngram == nullptr) {
      throw ConfigError("ngram_swap requires an n-gram model");
    }
    if (stage == PipelineStage::kNeuralRescore && models.rnn == nullptr) {
      throw ConfigError("neural_rescore requires a neural model");
    }
    if (stage == PipelineStage::kNeuralEnrichedRescore &&
        models.rnn_enriched == nullptr) {
      throw ConfigError("neural_enriched_rescore requires an enriched model");
    }
  }

  std::vector<Hypothesis> hypotheses;
  hypotheses.reserve(lattices.size());
  for (const Lattice& input : lattices) {
    Lattice current = input;
    Hypothesis hyp;
    hyp.utterance_id = input.utterance_id;
    hyp.tokens = BestPath(current, config.scales).words;
    for (PipelineStage stage : plan) {
      switch (stage) {
        case PipelineStage::kNgramSwap:
          current = ReplaceLmScores(current, *models.ngram);
          hyp.tokens = BestPath(current, config.scales).words;
          break;
        case PipelineStage::kNeuralRescore:
          hyp.tokens =
              NBestNeuralRescore(current, *models.rnn, config)[0].path.words;
          break;
        case PipelineStage::kNeuralEnrichedRescore:
          hyp.tokens = NBestNeuralRescore(current, *models.rnn_enriched,
                                          config)[0]
                           .path.words;
          break;
        case PipelineStage::kLatticeBoost:
          LatticeBoost(current, keywords, config.scales, &hyp);
          break;
      }
      hyp.stages.push_back(StageName(stage));
    }
    hypotheses.push_back(std::move(hyp));
  }
  return hypotheses;
}

void WriteHypotheses(const std::vector<Hypothesis>& hypotheses,
                     std::ostream& out) {
  for (const Hypothesis& hyp : hypotheses) {
    out << hyp.utterance_id << "\t" << (hyp.boosted ? 1 : 0) << "\t"
        << JoinTokens(hyp.tokens) << "\n";
  }
}

std::vector<Hypothesis> ReadHypotheses(std::istream& in) {
  std::vector<Hypothesis> hypotheses;
  std::map<std::string, int> seen;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = StripCr(std::move(line));
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = SplitChar(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(line_number, "expected 3 tab-separated fields");
    }
    if (fields[0].empty()) throw ParseError(line_number, "empty utterance id");
    if (fields[1] != "0" && fields[1] != "1") {
      throw ParseError(line_number, "boosted flag must be 0 or 1");
    }
    if (!seen.emplace(fields[0], line_number).second) {
      throw DuplicateUtteranceId(fields[0]);
    }
    Hypothesis hyp;
    hyp.utterance_id = fields[0];
    hyp.boosted = fields[1] == "1";
    hyp.tokens = SplitWhitespace(fields[2]);
    hypotheses.push_back(std::move(hyp));
  }
  return hypotheses;
}

void WriteHypothesesFile(const std::vector<Hypothesis>& hypotheses,
                         const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteHypotheses(hypotheses, out);
}

std::vector<Hypothesis> ReadHypothesesFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  return ReadHypotheses(in);
}

}  // namespace urne
