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

#include "urne/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "urne/errors.h"
#include "urne/text.h"

namespace urne {

int64_t Corpus::TokenCount(const std::string& token) const {
  auto it = vocabulary.find(token);
  return it == vocabulary.end() ? 0 : it->second;
}

int64_t Corpus::TotalTokens() const {
  int64_t total = 0;
  for (const auto& [token, count] : vocabulary) total += count;
  return total;
}

void RecountVocabulary(Corpus* corpus) {
  corpus->vocabulary.clear();
  for (const Utterance& utt : corpus->utterances) {
    for (const std::string& token : utt.tokens) ++corpus->vocabulary[token];
  }
}

Corpus LoadCorpus(std::istream& in) {
  Corpus corpus;
  std::set<std::string> seen_ids;
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string line = StripCr(std::move(raw));
    if (line.empty() || line[0] == '#') continue;
    Utterance utt;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      utt.id = "u" + std::to_string(line_number);
      utt.tokens = SplitWhitespace(line);
    } else {
      utt.id = line.substr(0, tab);
      if (utt.id.empty()) throw ParseError(line_number, "empty utterance id");
      utt.tokens = SplitWhitespace(line.substr(tab + 1));
    }
    if (!seen_ids.insert(utt.id).second) {
      throw DuplicateUtteranceId(utt.id);
    }
    corpus.utterances.push_back(std::move(utt));
  }
  if (corpus.utterances.empty()) throw EmptyCorpus("corpus has no utterances");
  RecountVocabulary(&corpus);
  return corpus;
}

Corpus LoadCorpusFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);
  return LoadCorpus(in);
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const Utterance& utt : corpus.utterances) {
    out << utt.id << "\t" << JoinTokens(utt.tokens) << "\n";
  }
}

void WriteCorpusFile(const Corpus& corpus, const std::string& path,
                     const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus file: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteCorpus(corpus, out);
}

const char* CategoryName(NeCategory category) {
  switch (category) {
    case NeCategory::kLocation: return "location";
    case NeCategory::kPerson: return "person";
    case NeCategory::kCountry: return "country";
    case NeCategory::kCompany: return "company";
    case NeCategory::kOrganization: return "organization";
    case NeCategory::kCity: return "city";
  }
  return "unknown";
}

bool ParseCategory(const std::string& name, NeCategory* category) {
  static const std::pair<const char*, NeCategory> kTable[] = {
      {"location", NeCategory::kLocation},
      {"person", NeCategory::kPerson},
      {"country", NeCategory::kCountry},
      {"company", NeCategory::kCompany},
      {"organization", NeCategory::kOrganization},
      {"city", NeCategory::kCity},
  };
  for (const auto& [key, value] : kTable) {
    if (name == key) {
      *category = value;
      return true;
    }
  }
  return false;
}

CountClass Classify(int64_t count, const CountThresholds& thresholds) {
  if (thresholds.ur_max + 1 != thresholds.rr_min) {
    throw InvalidThresholds("count classes must partition: ur_max + 1 == rr_min");
  }
  if (count == 0) return CountClass::kAbsent;
  if (count <= thresholds.ur_max) return CountClass::kRare;
  return CountClass::kRichlyRepresented;
}

std::vector<NamedEntity> LoadNeInventory(std::istream& in,
                                         const Corpus& corpus) {
  std::vector<NamedEntity> inventory;
  std::set<std::string> seen;
  std::string raw;
  int line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    std::string line = StripCr(std::move(raw));
    if (line.empty() || line[0] == '#') continue;
    const auto fields = SplitChar(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw ParseError(line_number, "expected surface<TAB>category");
    }
    NamedEntity ne;
    ne.surface = fields[0];
    if (ne.surface.find(' ') != std::string::npos) {
      throw ParseError(line_number,
                       "NE surface contains whitespace; join with '_'");
    }
    if (!ParseCategory(fields[1], &ne.category)) {
      throw UnknownCategory(line_number, fields[1]);
    }
    if (!seen.insert(ne.surface).second) {
      throw ParseError(line_number, "duplicate NE surface: " + ne.surface);
    }
    ne.train_count = corpus.TokenCount(ne.surface);
    inventory.push_back(std::move(ne));
  }
  return inventory;
}

std::vector<NamedEntity> LoadNeInventoryFile(const std::string& path,
                                             const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open NE inventory file: " + path);
  return LoadNeInventory(in, corpus);
}

void WriteNeInventory(const std::vector<NamedEntity>& inventory,
                      std::ostream& out) {
  for (const NamedEntity& ne : inventory) {
    out << ne.surface << "\t" << CategoryName(ne.category) << "\n";
  }
}

void WriteNeInventoryFile(const std::vector<NamedEntity>& inventory,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write NE inventory file: " + path);
  WriteNeInventory(inventory, out);
}

NeUtteranceIndex BuildIndex(const Corpus& corpus,
                            const std::vector<NamedEntity>& inventory,
                            const CountThresholds& thresholds) {
  NeUtteranceIndex index;
  std::map<std::string, const NamedEntity*> by_surface;
  for (const NamedEntity& ne : inventory) {
    index.utterances_by_ne[ne.surface];  // total over the inventory
    by_surface[ne.surface] = &ne;
    if (Classify(ne, thresholds) == CountClass::kRichlyRepresented) {
      index.rr_nes_by_category[ne.category].push_back(ne.surface);
    }
  }
  for (auto& [category, surfaces] : index.rr_nes_by_category) {
    std::sort(surfaces.begin(), surfaces.end());
  }
  for (const Utterance& utt : corpus.utterances) {
    std::set<std::string> seen_here;
    for (const std::string& token : utt.tokens) {
      if (by_surface.count(token) && seen_here.insert(token).second) {
        index.utterances_by_ne[token].push_back(utt.id);
      }
    }
  }
  return index;
}

}  // namespace urne
