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

#ifndef URNE_CORPUS_H_
#define URNE_CORPUS_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace urne {

struct Utterance {
  std::string id;
  std::vector<std::string> tokens;
};

// Tokenized training or test text plus token-level vocabulary counts.
struct Corpus {
  std::vector<Utterance> utterances;
  std::map<std::string, int64_t> vocabulary;  // token -> occurrence count

  int64_t TokenCount(const std::string& token) const;
  int64_t TotalTokens() const;
};

// One utterance per line: "<id>\t<token token ...>". Without a tab the whole
// line is tokens and an id "u<line>" is assigned. '#' lines are comments.
Corpus LoadCorpus(std::istream& in);
Corpus LoadCorpusFile(const std::string& path);
void WriteCorpus(const Corpus& corpus, std::ostream& out);
void WriteCorpusFile(const Corpus& corpus, const std::string& path,
                     const std::string& header = "");

// Rebuilds vocabulary counts from the utterance list.
void RecountVocabulary(Corpus* corpus);

enum class NeCategory { kLocation, kPerson, kCountry, kCompany, kOrganization, kCity };

const char* CategoryName(NeCategory category);
// Returns false when the name is not one of the six classes.
bool ParseCategory(const std::string& name, NeCategory* category);

// Single-token named entity; multi-word surfaces are joined with '_' during
// data preparation and treated atomically here.
struct NamedEntity {
  std::string surface;
  NeCategory category = NeCategory::kLocation;
  int64_t train_count = 0;
};

enum class CountClass { kAbsent, kRare, kRichlyRepresented };

// Absent = 0, Rare = [1, ur_max], RichlyRepresented = [rr_min, inf).
struct CountThresholds {
  int64_t ur_max = 9;
  int64_t rr_min = 10;
};

// Throws InvalidThresholds unless ur_max + 1 == rr_min.
CountClass Classify(int64_t count, const CountThresholds& thresholds);
inline CountClass Classify(const NamedEntity& ne,
                           const CountThresholds& thresholds) {
  return Classify(ne.train_count, thresholds);
}

// TSV "surface\tcategory" per line; train_count filled from the corpus
// vocabulary. Throws UnknownCategory or ParseError.
std::vector<NamedEntity> LoadNeInventory(std::istream& in,
                                         const Corpus& corpus);
std::vector<NamedEntity> LoadNeInventoryFile(const std::string& path,
                                             const Corpus& corpus);
void WriteNeInventory(const std::vector<NamedEntity>& inventory,
                      std::ostream& out);
void WriteNeInventoryFile(const std::vector<NamedEntity>& inventory,
                          const std::string& path);

// Hash index from NE surfaces to the utterances containing them, plus the
// RR-NE surfaces grouped by category.
struct NeUtteranceIndex {
  std::map<std::string, std::vector<std::string>> utterances_by_ne;
  std::map<NeCategory, std::vector<std::string>> rr_nes_by_category;
};

NeUtteranceIndex BuildIndex(const Corpus& corpus,
                            const std::vector<NamedEntity>& inventory,
                            const CountThresholds& thresholds = {});

}  // namespace urne

#endif  // URNE_CORPUS_H_
