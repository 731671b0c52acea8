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

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "doctest.h"
#include "test_support.h"
#include "urne/corpus.h"
#include "urne/errors.h"
#include "urne/rescore.h"

using namespace urne;
using urne::testing::EnumPath;
using urne::testing::EnumerateAllPaths;
using urne::testing::RandomLattice;
using urne::testing::RescoreFrontToBack;
using urne::testing::SortedPaths;

namespace {

const std::vector<std::string> kVocab = {"a", "b", "c", "d", "e"};

Lattice Chain(const std::vector<std::string>& words, double acoustic,
              double lm) {
  Lattice lattice;
  lattice.utterance_id = "chain";
  lattice.num_nodes = static_cast<int>(words.size()) + 1;
  for (size_t i = 0; i < words.size(); ++i) {
    lattice.arcs.push_back(
        {static_cast<int>(i), static_cast<int>(i) + 1, words[i], acoustic, lm});
  }
  lattice.final_nodes = {lattice.num_nodes - 1};
  return lattice;
}

Corpus MakeCorpus(const std::vector<std::vector<std::string>>& sentences) {
  Corpus corpus;
  for (size_t i = 0; i < sentences.size(); ++i) {
    corpus.utterances.push_back({"u" + std::to_string(i), sentences[i]});
  }
  RecountVocabulary(&corpus);
  return corpus;
}

Corpus RandomCorpus(Rng* rng, int sentences, int max_len) {
  std::vector<std::vector<std::string>> out;
  for (int s = 0; s < sentences; ++s) {
    std::vector<std::string> tokens;
    const int len = static_cast<int>(rng->UniformInt(1, max_len));
    for (int t = 0; t < len; ++t) {
      tokens.push_back(kVocab[rng->UniformInt(0, kVocab.size() - 1)]);
    }
    out.push_back(tokens);
  }
  return MakeCorpus(out);
}

// Exact front-to-back acoustic and LM sums over a path's arcs.
std::pair<double, double> PathTotals(const Lattice& lattice,
                                     const std::vector<int>& arcs) {
  double acoustic = 0.0;
  double lm = 0.0;
  for (int index : arcs) {
    acoustic += lattice.arcs[index].acoustic;
    lm += lattice.arcs[index].lm;
  }
  return {acoustic, lm};
}

// Hand-rolled model small enough to evaluate with scalar arithmetic:
// d = d_h = 1, vocabulary {</s>, <s>, <unk>, a, b}.
RnnLmModel TinyHandModel() {
  RnnLmModel model;
  model.hparams.embedding_dim = 1;
  model.hparams.hidden_dim = 1;
  model.vocab = {"</s>", "<s>", "<unk>", "a", "b"};
  for (size_t i = 0; i < model.vocab.size(); ++i) {
    model.word_to_id[model.vocab[i]] = static_cast<int>(i);
  }
  model.e_in.resize(5, 1);
  model.e_in << 0.1, 0.2, 0.3, 0.4, 0.5;
  model.w_x.resize(1, 1);
  model.w_x << 1.0;
  model.w_h.resize(1, 1);
  model.w_h << 0.5;
  model.b_h = Eigen::VectorXd::Zero(1);
  model.e_out.resize(5, 1);
  model.e_out << 1.0, -1.0, 0.0, 2.0, -2.0;
  model.b_o = Eigen::VectorXd::Zero(5);
  return model;
}

// Independent scalar forward pass over TinyHandModel.
double HandSentenceLogProb(const RnnLmModel& model,
                           const std::vector<std::string>& tokens) {
  const double e_in[] = {0.1, 0.2, 0.3, 0.4, 0.5};
  const double e_out[] = {1.0, -1.0, 0.0, 2.0, -2.0};
  std::vector<int> inputs = {1};
  std::vector<int> targets;
  for (const std::string& token : tokens) {
    const int id = model.word_to_id.count(token) > 0
                       ? model.word_to_id.at(token)
                       : 2;
    inputs.push_back(id);
    targets.push_back(id);
  }
  targets.push_back(0);
  double h = 0.0;
  double logprob = 0.0;
  for (size_t t = 0; t < targets.size(); ++t) {
    h = std::tanh(1.0 * e_in[inputs[t]] + 0.5 * h);
    double denom = 0.0;
    for (int w = 0; w < 5; ++w) denom += std::exp(e_out[w] * h);
    logprob += std::log(std::exp(e_out[targets[t]] * h) / denom);
  }
  return logprob;
}

}  // namespace

TEST_CASE("replaced linear lattice carries the sentence score") {
  Corpus corpus = MakeCorpus({{"a", "b"}, {"a", "c"}, {"b", "a"}});
  NGramModel model = TrainNGram(corpus, 2);
  Lattice lattice = Chain({"a", "b"}, -1.5, 0.0);
  Lattice replaced = ReplaceLmScores(lattice, model);
  const auto paths = EnumerateAllPaths(replaced, {1.0, 1.0});
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].words == std::vector<std::string>{"a", "b"});
  const auto [acoustic, lm] = PathTotals(replaced, paths[0].arcs);
  CHECK(acoustic == -3.0);
  CHECK(lm == doctest::Approx(kLn10 * model.SentenceLogProb({"a", "b"}))
                  .epsilon(1e-12));
}

TEST_CASE("order-1 replacement keeps the shape and scores arcs by unigrams") {
  Corpus corpus = MakeCorpus({{"a", "b"}, {"b", "c"}});
  NGramModel model = TrainNGram(corpus, 1);
  Lattice lattice;
  lattice.utterance_id = "diamond";
  lattice.num_nodes = 3;
  lattice.arcs.push_back({0, 1, "a", -1.0, -1.0});
  lattice.arcs.push_back({0, 1, "b", -1.0, -1.0});
  lattice.arcs.push_back({1, 2, "c", -1.0, -1.0});
  lattice.final_nodes = {2};
  Lattice replaced = ReplaceLmScores(lattice, model);
  CHECK(replaced.num_nodes == 3);
  REQUIRE(replaced.arcs.size() == 3);
  CHECK(replaced.arcs[0].lm ==
        doctest::Approx(kLn10 * model.LogProb({}, "a")).epsilon(1e-12));
  CHECK(replaced.arcs[0].acoustic == -1.0);
  // The arc into the final node absorbs the end-of-sentence term.
  CHECK(replaced.arcs[2].lm ==
        doctest::Approx(kLn10 * (model.LogProb({}, "c") +
                                 model.LogProb({"c"}, kSentenceEnd)))
            .epsilon(1e-12));
}

TEST_CASE("every path of a replaced lattice scores like the sentence") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Corpus corpus = RandomCorpus(&rng, 6, 5);
    NGramModel model = TrainNGram(corpus, 3);
    Lattice lattice = RandomLattice(&rng, 10, kVocab);
    Lattice replaced = ReplaceLmScores(lattice, model);

    const auto before = EnumerateAllPaths(lattice, {1.0, 1.0});
    const auto after = EnumerateAllPaths(replaced, {1.0, 1.0});
    REQUIRE(after.size() == before.size());

    std::multiset<std::pair<std::vector<std::string>, double>> before_keys;
    std::multiset<std::pair<std::vector<std::string>, double>> after_keys;
    for (const EnumPath& path : before) {
      before_keys.emplace(path.words, PathTotals(lattice, path.arcs).first);
    }
    for (const EnumPath& path : after) {
      after_keys.emplace(path.words, PathTotals(replaced, path.arcs).first);
      const double lm = PathTotals(replaced, path.arcs).second;
      CHECK(lm == doctest::Approx(kLn10 * model.SentenceLogProb(path.words))
                      .epsilon(1e-9));
    }
    CHECK(before_keys == after_keys);
  }
}

TEST_CASE("replacement rejects arcless lattices") {
  Lattice lattice;
  lattice.utterance_id = "empty";
  lattice.num_nodes = 1;
  lattice.final_nodes = {0};
  Corpus corpus = MakeCorpus({{"a"}});
  NGramModel model = TrainNGram(corpus, 2);
  CHECK_THROWS_AS(ReplaceLmScores(lattice, model), EmptyLattice);
}

TEST_CASE("lambda zero reproduces the n-best ranking") {
  RnnLmModel rnn = TinyHandModel();
  RescoreConfig config;
  config.nbest_n = 10;
  config.neural_interp_lambda = 0.0;
  config.scales = {0.9, 1.2};
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Lattice lattice = RandomLattice(&rng, 9, kVocab);
    const auto ranked = NBestNeuralRescore(lattice, rnn, config);
    const auto plain = NBest(lattice, config.nbest_n, config.scales);
    REQUIRE(ranked.size() == plain.size());
    for (size_t i = 0; i < ranked.size(); ++i) {
      CHECK(ranked[i].path.words == plain[i].words);
      CHECK(ranked[i].combined_score ==
            doctest::Approx(plain[i].total_score).epsilon(1e-12));
    }
  }
}

TEST_CASE("lambda one ranks by acoustic plus neural score") {
  RnnLmModel rnn = TinyHandModel();
  RescoreConfig config;
  config.nbest_n = 10;
  config.neural_interp_lambda = 1.0;
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    Lattice lattice = RandomLattice(&rng, 9, kVocab);
    const auto ranked = NBestNeuralRescore(lattice, rnn, config);
    REQUIRE(!ranked.empty());
    for (size_t i = 0; i < ranked.size(); ++i) {
      const double want = ranked[i].path.acoustic_total +
                          RnnSentenceLogProb(rnn, ranked[i].path.words);
      CHECK(ranked[i].combined_score == doctest::Approx(want).epsilon(1e-12));
      if (i > 0) {
        CHECK(ranked[i - 1].combined_score >= ranked[i].combined_score);
      }
    }
  }
}

TEST_CASE("two-path rescoring matches a scalar forward pass") {
  RnnLmModel rnn = TinyHandModel();
  Lattice lattice;
  lattice.utterance_id = "pair";
  lattice.num_nodes = 2;
  lattice.arcs.push_back({0, 1, "a", -1.0, -2.0});
  lattice.arcs.push_back({0, 1, "b", -1.1, -1.0});
  lattice.final_nodes = {1};

  RescoreConfig config;
  config.nbest_n = 2;
  const double lambda = config.neural_interp_lambda;
  const auto ranked = NBestNeuralRescore(lattice, rnn, config);
  REQUIRE(ranked.size() == 2);

  std::map<std::string, double> manual;
  manual["a"] = -1.0 + (1.0 - lambda) * -2.0 +
                lambda * HandSentenceLogProb(rnn, {"a"});
  manual["b"] = -1.1 + (1.0 - lambda) * -1.0 +
                lambda * HandSentenceLogProb(rnn, {"b"});
  const std::string& top = ranked[0].path.words[0];
  const std::string& bottom = ranked[1].path.words[0];
  CHECK(manual.at(top) >= manual.at(bottom));
  CHECK(ranked[0].combined_score ==
        doctest::Approx(manual.at(top)).epsilon(1e-9));
  CHECK(ranked[1].combined_score ==
        doctest::Approx(manual.at(bottom)).epsilon(1e-9));
  CHECK(ranked[0].neural_logprob ==
        doctest::Approx(HandSentenceLogProb(rnn, ranked[0].path.words))
            .epsilon(1e-9));
}

TEST_CASE("rescore configuration is validated") {
  RnnLmModel rnn = TinyHandModel();
  Lattice lattice = Chain({"a"}, -1.0, -1.0);
  RescoreConfig config;
  config.nbest_n = 0;
  CHECK_THROWS_AS(NBestNeuralRescore(lattice, rnn, config), ConfigError);
  config.nbest_n = 5;
  config.neural_interp_lambda = 1.5;
  CHECK_THROWS_AS(NBestNeuralRescore(lattice, rnn, config), ConfigError);
}

TEST_CASE("biased path takes the keyword branch of a diamond") {
  Lattice lattice;
  lattice.utterance_id = "diamond";
  lattice.num_nodes = 2;
  lattice.arcs.push_back({0, 1, "a", -1.0, -1.0});
  lattice.arcs.push_back({0, 1, "b", -4.0, -4.0});
  lattice.final_nodes = {1};

  CHECK(BestPath(lattice, {}).words == std::vector<std::string>{"a"});
  const auto biased = NeBiasedBestPath(lattice, {"b"});
  CHECK(biased.boosted);
  CHECK(biased.path.words == std::vector<std::string>{"b"});
  CHECK(biased.path.total_score <= BestPath(lattice, {}).total_score);
}

TEST_CASE("absent keywords fall back to the best path") {
  Lattice lattice = Chain({"a", "b", "c"}, -1.0, -1.0);
  const auto biased = NeBiasedBestPath(lattice, {"zebra"});
  const Path best = BestPath(lattice, {});
  CHECK(!biased.boosted);
  CHECK(biased.path.words == best.words);
  CHECK(biased.path.nodes == best.nodes);
  CHECK(biased.path.total_score == best.total_score);

  const auto none = NeBiasedBestPath(lattice, {});
  CHECK(!none.boosted);
  CHECK(none.path.words == best.words);
}

TEST_CASE("biased path equals the constrained enumeration argmax") {
  Rng rng(41);
  const ScaleConfig scales{1.0, 0.7};
  const std::set<std::string> keywords = {"d", "e"};
  int boosted_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Lattice lattice = RandomLattice(&rng, 10, kVocab);
    auto paths = EnumerateAllPaths(lattice, scales);
    RescoreFrontToBack(lattice, scales, &paths);
    const EnumPath* best_constrained = nullptr;
    for (const EnumPath& path : paths) {
      bool has_keyword = false;
      for (const std::string& word : path.words) {
        if (keywords.count(word) > 0) has_keyword = true;
      }
      if (!has_keyword) continue;
      if (best_constrained == nullptr ||
          path.score > best_constrained->score) {
        best_constrained = &path;
      }
    }

    const auto biased = NeBiasedBestPath(lattice, keywords, scales);
    const Path best = BestPath(lattice, scales);
    if (best_constrained == nullptr) {
      CHECK(!biased.boosted);
      CHECK(biased.path.words == best.words);
      continue;
    }
    ++boosted_cases;
    CHECK(biased.boosted);
    CHECK(biased.path.total_score ==
          doctest::Approx(best_constrained->score).epsilon(1e-9));
    bool has_keyword = false;
    for (const std::string& word : biased.path.words) {
      if (keywords.count(word) > 0) has_keyword = true;
    }
    CHECK(has_keyword);
    CHECK(biased.path.total_score <= best.total_score + 1e-12);
    bool best_has_keyword = false;
    for (const std::string& word : best.words) {
      if (keywords.count(word) > 0) best_has_keyword = true;
    }
    if (best_has_keyword) {
      CHECK(biased.path.total_score ==
            doctest::Approx(best.total_score).epsilon(1e-12));
    }
  }
  CHECK(boosted_cases > 20);
}

TEST_CASE("stage plans parse and reject junk") {
  CHECK(ParseStagePlan("").empty());
  const auto plan =
      ParseStagePlan("ngram_swap,neural_enriched_rescore,lattice_boost");
  REQUIRE(plan.size() == 3);
  CHECK(plan[0] == PipelineStage::kNgramSwap);
  CHECK(plan[1] == PipelineStage::kNeuralEnrichedRescore);
  CHECK(plan[2] == PipelineStage::kLatticeBoost);
  CHECK(StageName(plan[1]) == "neural_enriched_rescore");
  CHECK_THROWS_AS(ParseStagePlan("ngram_swap,frobnicate"), ConfigError);
  CHECK_THROWS_AS(ParseStagePlan("lattice_boost,lattice_boost"), ConfigError);
}

namespace {

struct PipelineFixture {
  Corpus corpus;
  NGramModel ngram;
  RnnLmModel rnn;
  RnnLmModel rnn_enriched;
  std::vector<NamedEntity> inventory;
  std::set<std::string> keywords;

  PipelineFixture() {
    std::vector<std::vector<std::string>> sentences;
    for (int i = 0; i < 12; ++i) {
      sentences.push_back({"go", "to", "orchard"});
      sentences.push_back({"stop", "at", "raffles"});
    }
    sentences.push_back({"go", "to", "simei"});
    corpus = MakeCorpus(sentences);
    ngram = TrainNGram(corpus, 2);
    RnnLmHyperparameters hparams;
    hparams.embedding_dim = 4;
    hparams.hidden_dim = 4;
    hparams.epochs = 2;
    hparams.seed = 19;
    rnn = TrainRnnLm(corpus, hparams);
    inventory = {
        {"orchard", NeCategory::kLocation, corpus.TokenCount("orchard")},
        {"raffles", NeCategory::kPerson, corpus.TokenCount("raffles")},
        {"simei", NeCategory::kLocation, corpus.TokenCount("simei")},
    };
    EnrichmentConfig config;
    config.rr_ne_donors = {"orchard", "raffles"};
    rnn_enriched = EnrichEmbeddings(rnn, inventory, config);
    keywords = {"simei"};
  }

  PipelineModels Models() const {
    return {&ngram, &rnn, &rnn_enriched};
  }
};

// 0 -> 1 ("go"), then parallel "orchard" (strong) / "simei" (weak) to 2.
Lattice KeywordLattice(const std::string& id, double keyword_penalty) {
  Lattice lattice;
  lattice.utterance_id = id;
  lattice.num_nodes = 3;
  lattice.arcs.push_back({0, 1, "go", -1.0, -1.0});
  lattice.arcs.push_back({1, 2, "orchard", -1.0, -1.0});
  lattice.arcs.push_back(
      {1, 2, "simei", -1.0 - keyword_penalty, -1.0 - keyword_penalty});
  lattice.final_nodes = {2};
  return lattice;
}

}  // namespace

TEST_CASE("empty plan returns first-pass best paths") {
  PipelineFixture fx;
  std::vector<Lattice> lattices = {KeywordLattice("u1", 2.0),
                                   Chain({"go", "to", "orchard"}, -1.0, -1.0)};
  lattices[1].utterance_id = "u2";
  const auto hyps = RunPipeline(lattices, {}, fx.Models(), fx.keywords, {});
  REQUIRE(hyps.size() == 2);
  CHECK(hyps[0].utterance_id == "u1");
  CHECK(hyps[0].tokens == BestPath(lattices[0], {}).words);
  CHECK(!hyps[0].boosted);
  CHECK(hyps[0].stages.empty());
  CHECK(hyps[1].tokens == std::vector<std::string>{"go", "to", "orchard"});
}

TEST_CASE("boost stage is a no-op without lattice keywords") {
  PipelineFixture fx;
  std::vector<Lattice> lattices = {
      Chain({"go", "to", "orchard"}, -1.0, -1.0),
      Chain({"stop", "at", "raffles"}, -1.0, -1.0)};
  lattices[0].utterance_id = "u1";
  lattices[1].utterance_id = "u2";
  const auto plain = RunPipeline(lattices, {}, fx.Models(), fx.keywords, {});
  const auto boosted =
      RunPipeline(lattices, ParseStagePlan("lattice_boost"), fx.Models(),
                  fx.keywords, {});
  REQUIRE(plain.size() == boosted.size());
  for (size_t i = 0; i < plain.size(); ++i) {
    CHECK(plain[i].tokens == boosted[i].tokens);
    CHECK(!boosted[i].boosted);
    CHECK(boosted[i].stages == std::vector<std::string>{"lattice_boost"});
  }
}

TEST_CASE("ngram swap stage re-decodes the swapped lattice") {
  PipelineFixture fx;
  std::vector<Lattice> lattices = {KeywordLattice("u1", 2.0)};
  const auto hyps = RunPipeline(lattices, ParseStagePlan("ngram_swap"),
                                fx.Models(), fx.keywords, {});
  REQUIRE(hyps.size() == 1);
  const Lattice swapped = ReplaceLmScores(lattices[0], fx.ngram);
  CHECK(hyps[0].tokens == BestPath(swapped, {}).words);
}

TEST_CASE("boost swaps in the keyword path and records provenance") {
  PipelineFixture fx;
  std::vector<Lattice> lattices = {KeywordLattice("u1", 4.0)};
  const auto plan =
      ParseStagePlan("ngram_swap,neural_enriched_rescore,lattice_boost");
  const auto hyps =
      RunPipeline(lattices, plan, fx.Models(), fx.keywords, {});
  REQUIRE(hyps.size() == 1);
  CHECK(hyps[0].boosted);
  CHECK(hyps[0].tokens == std::vector<std::string>{"go", "simei"});
  CHECK(hyps[0].stages ==
        std::vector<std::string>{"ngram_swap", "neural_enriched_rescore",
                                 "lattice_boost"});
}

TEST_CASE("boost keeps a hypothesis that already carries the keyword") {
  PipelineFixture fx;
  // The keyword branch wins outright, so the 1-best already has it.
  std::vector<Lattice> lattices = {KeywordLattice("u1", -2.0)};
  const auto hyps = RunPipeline(lattices, ParseStagePlan("lattice_boost"),
                                fx.Models(), fx.keywords, {});
  REQUIRE(hyps.size() == 1);
  CHECK(hyps[0].tokens == std::vector<std::string>{"go", "simei"});
  CHECK(!hyps[0].boosted);
}

TEST_CASE("boosting never loses keywords already in the one-best") {
  PipelineFixture fx;
  Rng rng(47);
  const std::set<std::string> keywords = {"d", "e"};
  std::vector<Lattice> lattices;
  for (int trial = 0; trial < 40; ++trial) {
    Lattice lattice = RandomLattice(&rng, 9, kVocab);
    lattice.utterance_id = "u" + std::to_string(trial);
    lattices.push_back(lattice);
  }
  const auto before = RunPipeline(lattices, {}, fx.Models(), keywords, {});
  const auto after = RunPipeline(lattices, ParseStagePlan("lattice_boost"),
                                 fx.Models(), keywords, {});
  REQUIRE(before.size() == after.size());
  int with_before = 0;
  int with_after = 0;
  for (size_t i = 0; i < before.size(); ++i) {
    bool keyword_before = false;
    for (const std::string& word : before[i].tokens) {
      if (keywords.count(word) > 0) keyword_before = true;
    }
    bool keyword_after = false;
    for (const std::string& word : after[i].tokens) {
      if (keywords.count(word) > 0) keyword_after = true;
    }
    if (keyword_before) {
      CHECK(keyword_after);
      CHECK(before[i].tokens == after[i].tokens);
    }
    with_before += keyword_before ? 1 : 0;
    with_after += keyword_after ? 1 : 0;
  }
  CHECK(with_after >= with_before);
}

TEST_CASE("pipeline validates stage models") {
  PipelineFixture fx;
  std::vector<Lattice> lattices = {KeywordLattice("u1", 2.0)};
  PipelineModels missing;
  CHECK_THROWS_AS(RunPipeline(lattices, ParseStagePlan("ngram_swap"), missing,
                              fx.keywords, {}),
                  ConfigError);
  missing.ngram = &fx.ngram;
  CHECK_THROWS_AS(RunPipeline(lattices, ParseStagePlan("neural_rescore"),
                              missing, fx.keywords, {}),
                  ConfigError);
  CHECK_THROWS_AS(
      RunPipeline(lattices, ParseStagePlan("neural_enriched_rescore"),
                  missing, fx.keywords, {}),
      ConfigError);
}

TEST_CASE("hypotheses round-trip through the text format") {
  std::vector<Hypothesis> hyps;
  hyps.push_back({"u1", {"go", "to", "orchard"}, false, {}});
  hyps.push_back({"u2", {"simei"}, true, {}});
  hyps.push_back({"u3", {}, false, {}});
  std::ostringstream out;
  WriteHypotheses(hyps, out);
  CHECK(out.str() ==
        "u1\t0\tgo to orchard\n"
        "u2\t1\tsimei\n"
        "u3\t0\t\n");
  std::istringstream in("# provenance\n" + out.str());
  const auto reread = ReadHypotheses(in);
  REQUIRE(reread.size() == 3);
  CHECK(reread[0].utterance_id == "u1");
  CHECK(reread[0].tokens == hyps[0].tokens);
  CHECK(!reread[0].boosted);
  CHECK(reread[1].boosted);
  CHECK(reread[2].tokens.empty());
}

TEST_CASE("hypothesis parser reports malformed lines") {
  std::istringstream two_fields("u1\t0\n");
  CHECK_THROWS_AS(ReadHypotheses(two_fields), ParseError);
  std::istringstream bad_flag("u1\t2\tgo\n");
  CHECK_THROWS_AS(ReadHypotheses(bad_flag), ParseError);
  std::istringstream duplicate("u1\t0\tgo\nu1\t0\tstop\n");
  CHECK_THROWS_AS(ReadHypotheses(duplicate), DuplicateUtteranceId);
  try {
    std::istringstream in("u1\t0\tgo\nu2\t0\n");
    ReadHypotheses(in);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}
