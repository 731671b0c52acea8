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

#ifndef URNE_RESCORE_H_
#define URNE_RESCORE_H_

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "urne/lattice.h"
#include "urne/lattice_ops.h"
#include "urne/ngram.h"
#include "urne/rnnlm.h"

namespace urne {

struct RescoreConfig {
  ScaleConfig scales;
  int nbest_n = 50;
  // Mixes the lattice n-gram LM score with the neural score inside the
  // lm-scaled term: (1 - lambda) * ngram + lambda * neural.
  double neural_interp_lambda = 0.5;
};

// Expands the lattice so every arc has a unique LM history of up to order-1
// preceding words, then overwrites arc LM scores with the model's natural-log
// conditional probabilities. Arcs into final nodes absorb the sentence-end
// probability; final nodes that also continue are split into a stopping and
// a continuing copy. Acoustic scores and word sequences are untouched, and
// each complete path's LM total equals the model's sentence score times ln10.
// Throws EmptyLattice, CycleDetected.
Lattice ReplaceLmScores(const Lattice& lattice, const NGramModel& model);

struct RescoredPath {
  Path path;
  double neural_logprob = 0.0;
  double combined_score = 0.0;
};

// Extracts the top nbest_n paths and reranks them by
//   acoustic_scale * acoustic
//     + lm_scale * ((1 - lambda) * lattice_lm + lambda * neural_logprob).
// Descending by combined score; ties keep the original n-best order.
// Throws EmptyLattice, ConfigError.
std::vector<RescoredPath> NBestNeuralRescore(const Lattice& lattice,
                                             const RnnLmModel& rnn,
                                             const RescoreConfig& config);

struct BiasedPathResult {
  Path path;
  bool boosted = false;
};

// Best complete path constrained to traverse at least one arc labeled with a
// keyword, maximizing over keyword occurrences; falls back to the
// unconstrained best path (boosted = false) when no keyword arc lies on a
// complete path. Throws EmptyLattice.
BiasedPathResult NeBiasedBestPath(const Lattice& lattice,
                                  const std::set<std::string>& keywords,
                                  const ScaleConfig& scales = {});

enum class PipelineStage {
  kNgramSwap,
  kNeuralRescore,
  kNeuralEnrichedRescore,
  kLatticeBoost,
};

const std::string& StageName(PipelineStage stage);

// Comma-separated stage names; the empty string denotes the empty plan.
// Throws ConfigError on unknown or repeated stages.
std::vector<PipelineStage> ParseStagePlan(const std::string& text);

struct PipelineModels {
  const NGramModel* ngram = nullptr;
  const RnnLmModel* rnn = nullptr;
  const RnnLmModel* rnn_enriched = nullptr;
};

struct Hypothesis {
  std::string utterance_id;
  std::vector<std::string> tokens;
  bool boosted = false;
  std::vector<std::string> stages;  // applied stage names, in order
};

// One lattice_boost step on an existing hypothesis: swaps in the
// keyword-constrained path unless the tokens already contain a keyword.
// Returns true when the swap happened. Throws EmptyLattice.
bool LatticeBoost(const Lattice& lattice, const std::set<std::string>& keywords,
                  const ScaleConfig& scales, Hypothesis* hypothesis);

// Applies the stage plan to every lattice. The hypothesis starts as the
// first-pass best path; ngram_swap re-decodes after score replacement, the
// neural stages take the top reranked candidate, and lattice_boost swaps in
// the keyword-constrained path unless the current hypothesis already
// contains a keyword. Throws ConfigError when a stage lacks its model.
std::vector<Hypothesis> RunPipeline(const std::vector<Lattice>& lattices,
                                    const std::vector<PipelineStage>& plan,
                                    const PipelineModels& models,
                                    const std::set<std::string>& keywords,
                                    const RescoreConfig& config);

// One line per utterance: <utterance_id>\t<boosted 0|1>\t<word ...>.
// Lines starting with '#' are comments.
void WriteHypotheses(const std::vector<Hypothesis>& hypotheses,
                     std::ostream& out);
std::vector<Hypothesis> ReadHypotheses(std::istream& in);

void WriteHypothesesFile(const std::vector<Hypothesis>& hypotheses,
                         const std::string& path,
                         const std::string& header = "");
std::vector<Hypothesis> ReadHypothesesFile(const std::string& path);

}  // namespace urne

#endif  // URNE_RESCORE_H_
