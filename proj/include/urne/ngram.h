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

#ifndef URNE_NGRAM_H_
#define URNE_NGRAM_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "urne/corpus.h"

namespace urne {

// Back-off n-gram language model with Witten-Bell smoothing.
//
// Probabilities and back-off weights are stored as base-10 logs (ARPA
// convention). kLn10 converts to natural logs where lattice scores live.

inline constexpr double kLn10 = 2.302585092994046;

inline constexpr const char* kSentenceBegin = "<s>";
inline constexpr const char* kSentenceEnd = "</s>";
inline constexpr const char* kUnknown = "<unk>";

struct NGramEntry {
  double logprob = 0.0;   // log10 P(w | context)
  double logbow = 0.0;    // log10 back-off weight, valid iff has_bow
  bool has_bow = false;
};

class NGramModel {
 public:
  int order = 0;
  // tables[k-1] maps a k-gram, tokens joined by single spaces, to its entry.
  std::vector<std::map<std::string, NGramEntry>> tables;

  bool InVocab(const std::string& word) const;

  // Standard back-off recursion. History is truncated to the rightmost
  // order-1 tokens; out-of-vocabulary tokens map to the unknown symbol.
  double LogProb(const std::vector<std::string>& history,
                 const std::string& word) const;

  // Chain-rule log10 probability of the token sequence framed by the
  // sentence-begin and sentence-end symbols.
  double SentenceLogProb(const std::vector<std::string>& tokens) const;

  // Sorted unigram vocabulary, including the reserved symbols.
  std::vector<std::string> Vocabulary() const;
};

enum class Smoothing { kWittenBell };

NGramModel TrainNGram(const Corpus& corpus, int order,
                      Smoothing smoothing = Smoothing::kWittenBell);

// ARPA text I/O. WriteArpa emits sections in ascending order with entries
// sorted by n-gram; ReadArpa checks the \data\ header against the section
// bodies and throws SectionCountMismatch on disagreement.
void WriteArpa(const NGramModel& model, std::ostream& out);
NGramModel ReadArpa(std::istream& in);
void WriteArpaFile(const NGramModel& model, const std::string& path,
                   const std::string& header = "");
NGramModel ReadArpaFile(const std::string& path);

}  // namespace urne

#endif  // URNE_NGRAM_H_
