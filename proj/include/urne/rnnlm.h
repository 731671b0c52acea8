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

#ifndef URNE_RNNLM_H_
#define URNE_RNNLM_H_

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "urne/corpus.h"

namespace urne {

// Word-level Elman recurrent LM in double precision:
//   h_t = tanh(W_x x_t + W_h h_{t-1} + b_h),  logits = E_out h_t + b_o.
// Input and output embeddings are separate so entity rows can be enriched
// on either side.

struct RnnLmHyperparameters {
  int embedding_dim = 16;
  int hidden_dim = 16;
  double learning_rate = 0.1;
  int epochs = 5;
  int truncation = 8;  // BPTT chunk length
  uint64_t seed = 0;
};

class RnnLmModel {
 public:
  RnnLmHyperparameters hparams;
  std::vector<std::string> vocab;        // id -> word, sorted
  std::map<std::string, int> word_to_id;
  Eigen::MatrixXd e_in;    // V x d
  Eigen::MatrixXd w_x;     // d_h x d
  Eigen::MatrixXd w_h;     // d_h x d_h
  Eigen::VectorXd b_h;     // d_h
  Eigen::MatrixXd e_out;   // V x d_h
  Eigen::VectorXd b_o;     // V
  bool enriched = false;
  // Entry 0 is the untrained model's perplexity over the training corpus;
  // entry e the perplexity after epoch e.
  std::vector<double> epoch_perplexities;

  int WordId(const std::string& word) const;  // OOV maps to the unknown id
  double SentenceLogProb(const std::vector<std::string>& tokens) const;
};

RnnLmModel TrainRnnLm(const Corpus& corpus,
                      const RnnLmHyperparameters& hparams);

// Natural-log sentence probability under teacher forcing, end symbol
// included. Present as a free function for symmetry with the n-gram side.
double RnnSentenceLogProb(const RnnLmModel& model,
                          const std::vector<std::string>& tokens);

// Softmax over the vocabulary after consuming the prefix (sentence-begin
// prepended). Indices follow model.vocab.
Eigen::VectorXd NextWordDistribution(const RnnLmModel& model,
                                     const std::vector<std::string>& prefix);

// Cross-entropy loss of one full sequence (tokens plus end symbol, framed by
// sentence-begin) together with analytic gradients for every parameter.
// Single chunk, no truncation; the training loop runs this per chunk.
struct RnnGradients {
  Eigen::MatrixXd e_in, w_x, w_h, e_out;
  Eigen::VectorXd b_h, b_o;
};

double SequenceLossAndGradients(const RnnLmModel& model,
                                const std::vector<std::string>& tokens,
                                RnnGradients* grads);

// Embedding enrichment: each under-represented entity row is replaced by
//   (e_u + sum_c m_c e_c) / (num_donors + 1)
// with m_c = m_same for donors sharing the target's category, m_diff
// otherwise.

enum class EnrichTarget { kInput, kOutput, kBoth };

struct EnrichmentConfig {
  std::vector<std::string> rr_ne_donors;  // surfaces, order preserved
  int64_t ur_target_max_count = 7;
  double m_same = 0.7;
  double m_diff = 0.3;
  EnrichTarget apply_to = EnrichTarget::kBoth;
};

// The row update above, exposed for direct checks. weighted_donors pairs
// (m_c, e_c); an empty donor list returns e_u unchanged.
Eigen::VectorXd EnrichedEmbedding(
    const Eigen::VectorXd& e_u,
    const std::vector<std::pair<double, Eigen::VectorXd>>& weighted_donors);

// Returns a copy of the model with target rows enriched and everything else
// bit-identical. Targets are inventory entities in the vocabulary with
// training count at most ur_target_max_count. Throws DonorNotInVocab,
// DonorNotRR, or AlreadyEnriched.
RnnLmModel EnrichEmbeddings(const RnnLmModel& model,
                            const std::vector<NamedEntity>& inventory,
                            const EnrichmentConfig& config);

// Seeded-random donor pick over the richly represented inventory surfaces.
std::vector<std::string> SelectDonors(
    const std::vector<NamedEntity>& inventory, int num_donors, uint64_t seed,
    const CountThresholds& thresholds = {});

// Versioned text checkpoint, exact round-trip.
void WriteRnnLm(const RnnLmModel& model, std::ostream& out);
RnnLmModel ReadRnnLm(std::istream& in);
void WriteRnnLmFile(const RnnLmModel& model, const std::string& path,
                    const std::string& header = "");
RnnLmModel ReadRnnLmFile(const std::string& path);

}  // namespace urne

#endif  // URNE_RNNLM_H_
