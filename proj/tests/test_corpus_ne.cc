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

#include <map>
#include <sstream>

#include "doctest.h"
#include "urne/corpus.h"
#include "urne/errors.h"
#include "urne/rng.h"

using namespace urne;

TEST_CASE("corpus loads ids and counts tokens") {
  std::istringstream in(
      "u1\tgo to orchard road\n"
      "u2\tthe weather today\n");
  Corpus corpus = LoadCorpus(in);
  REQUIRE(corpus.utterances.size() == 2);
  CHECK(corpus.utterances[0].id == "u1");
  CHECK(corpus.utterances[0].tokens ==
        std::vector<std::string>{"go", "to", "orchard", "road"});
  CHECK(corpus.TotalTokens() == 7);
  CHECK(corpus.TokenCount("orchard") == 1);
  CHECK(corpus.TokenCount("zion") == 0);
}

TEST_CASE("corpus assigns ids when missing") {
  std::istringstream in("hello there\n\n# comment\nsecond line\n");
  Corpus corpus = LoadCorpus(in);
  REQUIRE(corpus.utterances.size() == 2);
  CHECK(corpus.utterances[0].id == "u1");
  CHECK(corpus.utterances[1].id == "u4");
}

TEST_CASE("duplicate utterance ids are rejected") {
  std::istringstream in("u1\ta b\nu1\tc d\n");
  CHECK_THROWS_AS(LoadCorpus(in), DuplicateUtteranceId);
}

TEST_CASE("empty corpus is rejected") {
  std::istringstream in("# nothing here\n\n");
  CHECK_THROWS_AS(LoadCorpus(in), EmptyCorpus);
}

TEST_CASE("vocabulary recount matches a naive scan") {
  Rng rng(41);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  Corpus corpus;
  for (int u = 0; u < 20; ++u) {
    Utterance utt;
    utt.id = "u" + std::to_string(u);
    const int len = static_cast<int>(rng.UniformInt(1, 6));
    for (int t = 0; t < len; ++t) {
      utt.tokens.push_back(vocab[rng.UniformInt(0, vocab.size() - 1)]);
    }
    corpus.utterances.push_back(utt);
  }
  RecountVocabulary(&corpus);
  std::map<std::string, int64_t> naive;
  for (const auto& utt : corpus.utterances) {
    for (const auto& token : utt.tokens) ++naive[token];
  }
  CHECK(corpus.vocabulary.size() == naive.size());
  for (const auto& [word, count] : naive) {
    CHECK(corpus.TokenCount(word) == count);
  }
}

TEST_CASE("corpus text round-trips") {
  std::istringstream in("u1\tgo to orchard road\nu2\tthe weather today\n");
  Corpus corpus = LoadCorpus(in);
  std::ostringstream out;
  WriteCorpus(corpus, out);
  std::istringstream again(out.str());
  Corpus reparsed = LoadCorpus(again);
  REQUIRE(reparsed.utterances.size() == corpus.utterances.size());
  for (size_t i = 0; i < corpus.utterances.size(); ++i) {
    CHECK(reparsed.utterances[i].id == corpus.utterances[i].id);
    CHECK(reparsed.utterances[i].tokens == corpus.utterances[i].tokens);
  }
}

TEST_CASE("inventory picks up training counts") {
  std::istringstream corpus_in(
      "u1\tgo to orchard road\n"
      "u2\torchard is closed\n"
      "u3\tnear orchard again\n");
  Corpus corpus = LoadCorpus(corpus_in);
  std::istringstream inv_in("orchard\tlocation\nzion\tlocation\n");
  const auto inventory = LoadNeInventory(inv_in, corpus);
  REQUIRE(inventory.size() == 2);
  CHECK(inventory[0].surface == "orchard");
  CHECK(inventory[0].category == NeCategory::kLocation);
  CHECK(inventory[0].train_count == 3);
  CHECK(inventory[1].surface == "zion");
  CHECK(inventory[1].train_count == 0);
}

TEST_CASE("unknown category reports its line") {
  std::istringstream corpus_in("u1\ta b\n");
  Corpus corpus = LoadCorpus(corpus_in);
  std::istringstream inv_in("orchard\tlocation\nrex\tanimal\n");
  try {
    LoadNeInventory(inv_in, corpus);
    FAIL("expected UnknownCategory");
  } catch (const UnknownCategory& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("category names round-trip") {
  for (NeCategory c :
       {NeCategory::kLocation, NeCategory::kPerson, NeCategory::kCountry,
        NeCategory::kCompany, NeCategory::kOrganization, NeCategory::kCity}) {
    NeCategory parsed;
    REQUIRE(ParseCategory(CategoryName(c), &parsed));
    CHECK(parsed == c);
  }
  NeCategory unused;
  CHECK(!ParseCategory("animal", &unused));
}

TEST_CASE("count classes at the default thresholds") {
  const CountThresholds t;
  CHECK(Classify(0, t) == CountClass::kAbsent);
  CHECK(Classify(5, t) == CountClass::kRare);
  CHECK(Classify(9, t) == CountClass::kRare);
  CHECK(Classify(10, t) == CountClass::kRichlyRepresented);
  CHECK(Classify(873, t) == CountClass::kRichlyRepresented);
}

TEST_CASE("classes partition all counts") {
  const CountThresholds t{9, 10};
  int absent = 0, rare = 0, rich = 0;
  for (int64_t c = 0; c <= 1000; ++c) {
    switch (Classify(c, t)) {
      case CountClass::kAbsent: ++absent; break;
      case CountClass::kRare: ++rare; break;
      case CountClass::kRichlyRepresented: ++rich; break;
    }
  }
  CHECK(absent == 1);
  CHECK(rare == 9);
  CHECK(rich == 991);
}

TEST_CASE("gapped thresholds are rejected") {
  CHECK_THROWS_AS(Classify(3, CountThresholds{9, 12}), InvalidThresholds);
  CHECK_THROWS_AS(Classify(3, CountThresholds{9, 9}), InvalidThresholds);
}

TEST_CASE("index maps entities to their utterances") {
  std::istringstream corpus_in(
      "u1\tgo to orchard road\n"
      "u2\torchard orchard twice\n"
      "u3\tnothing here\n");
  Corpus corpus = LoadCorpus(corpus_in);
  std::istringstream inv_in("orchard\tlocation\nzion\tlocation\n");
  const auto inventory = LoadNeInventory(inv_in, corpus);
  const auto index = BuildIndex(corpus, inventory);
  REQUIRE(index.utterances_by_ne.count("orchard") == 1);
  CHECK(index.utterances_by_ne.at("orchard") ==
        std::vector<std::string>{"u1", "u2"});
  REQUIRE(index.utterances_by_ne.count("zion") == 1);
  CHECK(index.utterances_by_ne.at("zion").empty());
}

TEST_CASE("index groups richly represented entities by category") {
  Corpus corpus;
  for (int u = 0; u < 12; ++u) {
    Utterance utt;
    utt.id = "u" + std::to_string(u);
    utt.tokens = {"visit", "orchard", "with", "alice"};
    corpus.utterances.push_back(utt);
  }
  corpus.utterances.push_back({"u99", {"rare", "zion", "mention"}});
  RecountVocabulary(&corpus);
  std::vector<NamedEntity> inventory = {
      {"orchard", NeCategory::kLocation, corpus.TokenCount("orchard")},
      {"zion", NeCategory::kLocation, corpus.TokenCount("zion")},
      {"alice", NeCategory::kPerson, corpus.TokenCount("alice")},
  };
  const auto index = BuildIndex(corpus, inventory);
  CHECK(index.rr_nes_by_category.at(NeCategory::kLocation) ==
        std::vector<std::string>{"orchard"});
  CHECK(index.rr_nes_by_category.at(NeCategory::kPerson) ==
        std::vector<std::string>{"alice"});
  CHECK(index.rr_nes_by_category.count(NeCategory::kCity) == 0);
}

TEST_CASE("index matches a naive scan on random corpora") {
  Rng rng(43);
  const std::vector<std::string> vocab = {"go", "to", "orchard", "zion",
                                          "alice", "the", "road"};
  for (int trial = 0; trial < 20; ++trial) {
    Corpus corpus;
    const int num_utts = static_cast<int>(rng.UniformInt(1, 30));
    for (int u = 0; u < num_utts; ++u) {
      Utterance utt;
      utt.id = "u" + std::to_string(u);
      const int len = static_cast<int>(rng.UniformInt(1, 8));
      for (int t = 0; t < len; ++t) {
        utt.tokens.push_back(vocab[rng.UniformInt(0, vocab.size() - 1)]);
      }
      corpus.utterances.push_back(utt);
    }
    RecountVocabulary(&corpus);
    std::vector<NamedEntity> inventory = {
        {"orchard", NeCategory::kLocation, corpus.TokenCount("orchard")},
        {"zion", NeCategory::kLocation, corpus.TokenCount("zion")},
        {"alice", NeCategory::kPerson, corpus.TokenCount("alice")},
    };
    const auto index = BuildIndex(corpus, inventory);
    for (const auto& entity : inventory) {
      std::vector<std::string> expected;
      for (const auto& utt : corpus.utterances) {
        for (const auto& token : utt.tokens) {
          if (token == entity.surface) {
            expected.push_back(utt.id);
            break;
          }
        }
      }
      CHECK(index.utterances_by_ne.at(entity.surface) == expected);
    }
  }
}

TEST_CASE("inventory rejects duplicate surfaces") {
  std::istringstream corpus_in("u1\ta b\n");
  Corpus corpus = LoadCorpus(corpus_in);
  std::istringstream inv_in("orchard\tlocation\norchard\tcity\n");
  CHECK_THROWS_AS(LoadNeInventory(inv_in, corpus), ParseError);
}

TEST_CASE("inventory rejects multiword surfaces") {
  std::istringstream corpus_in("u1\ta b\n");
  Corpus corpus = LoadCorpus(corpus_in);
  std::istringstream inv_in("orchard road\tlocation\n");
  CHECK_THROWS_AS(LoadNeInventory(inv_in, corpus), ParseError);
}
