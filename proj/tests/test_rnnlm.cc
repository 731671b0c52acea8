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
#include <sstream>

#include "doctest.h"
#include "urne/corpus.h"
#include "urne/errors.h"
#include "urne/ngram.h"
#include "urne/rnnlm.h"
#include "urne/rng.h"

using namespace urne;

namespace {

Corpus RepeatCorpus(const std::vector<std::string>& tokens, int copies) {
  Corpus corpus;
  for (int i = 0; i < copies; ++i) {
    corpus.utterances.push_back({"u" + std::to_string(i), tokens});
  }
  RecountVocabulary(&corpus);
  return corpus;
}

Corpus SmallCorpus() {
  Corpus corpus;
  corpus.utterances.push_back({"u1", {"a", "b", "c"}});
  corpus.utterances.push_back({"u2", {"b", "a"}});
  corpus.utterances.push_back({"u3", {"c", "c", "a", "b"}});
  RecountVocabulary(&corpus);
  return corpus;
}

}  // namespace

TEST_CASE("repeating pattern is learnable") {
  Corpus corpus = RepeatCorpus({"a", "b"}, 200);
  RnnLmHyperparameters hparams;
  hparams.embedding_dim = 8;
  hparams.hidden_dim = 8;
  hparams.learning_rate = 0.1;
  hparams.epochs = 20;
  hparams.seed = 1;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  REQUIRE(model.epoch_perplexities.size() == 21);
  CHECK(model.epoch_perplexities.back() < 1.5);
}

TEST_CASE("untrained perplexity sits near the vocabulary size") {
  Corpus corpus = RepeatCorpus({"a", "b"}, 50);
  RnnLmHyperparameters hparams;
  hparams.epochs = 0;
  hparams.seed = 7;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  REQUIRE(model.epoch_perplexities.size() == 1);
  const double v = static_cast<double>(model.vocab.size());  // 5
  CHECK(model.epoch_perplexities[0] > v / 2.0);
  CHECK(model.epoch_perplexities[0] < v * 2.0);
}

TEST_CASE("analytic gradients match central differences") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.embedding_dim = 5;
  hparams.hidden_dim = 4;
  hparams.epochs = 1;
  hparams.truncation = 32;  // longer than any test sequence
  hparams.seed = 3;
  RnnLmModel model = TrainRnnLm(corpus, hparams);

  const std::vector<std::string> sequence = {"a", "b", "c", "a"};
  RnnGradients grads;
  SequenceLossAndGradients(model, sequence, &grads);

  struct Slot {
    double* value;
    double analytic;
  };
  std::vector<Slot> slots;
  auto add_matrix = [&](Eigen::MatrixXd* param, const Eigen::MatrixXd& grad) {
    for (Eigen::Index r = 0; r < param->rows(); ++r) {
      for (Eigen::Index c = 0; c < param->cols(); ++c) {
        slots.push_back({&(*param)(r, c), grad(r, c)});
      }
    }
  };
  auto add_vector = [&](Eigen::VectorXd* param, const Eigen::VectorXd& grad) {
    for (Eigen::Index i = 0; i < param->size(); ++i) {
      slots.push_back({&(*param)(i), grad(i)});
    }
  };
  add_matrix(&model.e_in, grads.e_in);
  add_matrix(&model.w_x, grads.w_x);
  add_matrix(&model.w_h, grads.w_h);
  add_vector(&model.b_h, grads.b_h);
  add_matrix(&model.e_out, grads.e_out);
  add_vector(&model.b_o, grads.b_o);

  Rng rng(11);
  const double eps = 1e-5;
  int checked = 0;
  while (checked < 20) {
    Slot& slot = slots[rng.UniformInt(0, slots.size() - 1)];
    const double saved = *slot.value;
    *slot.value = saved + eps;
    const double plus = SequenceLossAndGradients(model, sequence, nullptr);
    *slot.value = saved - eps;
    const double minus = SequenceLossAndGradients(model, sequence, nullptr);
    *slot.value = saved;
    const double numeric = (plus - minus) / (2.0 * eps);
    const double denom = std::max({std::abs(numeric), std::abs(slot.analytic),
                                   1e-8});
    CHECK(std::abs(numeric - slot.analytic) / denom < 1e-4);
    ++checked;
  }
}

TEST_CASE("next-word distributions are normalized at every step") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 2;
  hparams.seed = 5;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  std::vector<std::string> prefix;
  for (const std::string next : {"a", "b", "c", "zzz"}) {
    const Eigen::VectorXd p = NextWordDistribution(model, prefix);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.minCoeff() > 0.0);
    prefix.push_back(next);
  }
}

TEST_CASE("empty sentence scores the end symbol from the start state") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 1;
  hparams.seed = 5;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  const Eigen::VectorXd p = NextWordDistribution(model, {});
  const double expected = std::log(p(model.word_to_id.at(kSentenceEnd)));
  CHECK(RnnSentenceLogProb(model, {}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sentence score accumulates stepwise distributions") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 2;
  hparams.seed = 9;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  Rng rng(13);
  const std::vector<std::string> alphabet = {"a", "b", "c", "zzz"};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> sentence;
    const int len = static_cast<int>(rng.UniformInt(0, 5));
    for (int t = 0; t < len; ++t) {
      sentence.push_back(alphabet[rng.UniformInt(0, alphabet.size() - 1)]);
    }
    double sum = 0.0;
    std::vector<std::string> prefix;
    for (const std::string& token : sentence) {
      const Eigen::VectorXd p = NextWordDistribution(model, prefix);
      sum += std::log(p(model.WordId(token)));
      prefix.push_back(token);
    }
    const Eigen::VectorXd p = NextWordDistribution(model, prefix);
    sum += std::log(p(model.word_to_id.at(kSentenceEnd)));
    CHECK(RnnSentenceLogProb(model, sentence) ==
          doctest::Approx(sum).epsilon(1e-9));
  }
}

TEST_CASE("oov tokens score like the unknown symbol") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 1;
  hparams.seed = 2;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  CHECK(RnnSentenceLogProb(model, {"zzz", "a"}) ==
        RnnSentenceLogProb(model, {kUnknown, "a"}));
}

TEST_CASE("training is deterministic in the seed") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 3;
  hparams.seed = 21;
  RnnLmModel a = TrainRnnLm(corpus, hparams);
  RnnLmModel b = TrainRnnLm(corpus, hparams);
  std::ostringstream sa, sb;
  WriteRnnLm(a, sa);
  WriteRnnLm(b, sb);
  CHECK(sa.str() == sb.str());

  hparams.seed = 22;
  RnnLmModel c = TrainRnnLm(corpus, hparams);
  std::ostringstream sc;
  WriteRnnLm(c, sc);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("divergence is reported") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.learning_rate = 1e200;
  hparams.epochs = 5;
  hparams.seed = 4;
  CHECK_THROWS_AS(TrainRnnLm(corpus, hparams), DivergenceDetected);
}

TEST_CASE("checkpoint round-trips bit for bit") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 2;
  hparams.seed = 17;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  std::ostringstream out;
  WriteRnnLm(model, out);
  std::istringstream in(out.str());
  RnnLmModel reread = ReadRnnLm(in);
  std::ostringstream again;
  WriteRnnLm(reread, again);
  CHECK(out.str() == again.str());
  CHECK(reread.SentenceLogProb({"a", "b"}) == model.SentenceLogProb({"a", "b"}));
  CHECK(reread.vocab == model.vocab);
  CHECK(reread.enriched == model.enriched);
}

TEST_CASE("checkpoint parser reports malformed rows") {
  Corpus corpus = SmallCorpus();
  RnnLmHyperparameters hparams;
  hparams.epochs = 0;
  RnnLmModel model = TrainRnnLm(corpus, hparams);
  std::ostringstream out;
  WriteRnnLm(model, out);
  std::string text = out.str();
  text.replace(text.find("\\w_x"), 4, "\\w_z");
  std::istringstream in(text);
  CHECK_THROWS_AS(ReadRnnLm(in), ParseError);
}

TEST_CASE("enriched row follows the update rule") {
  Eigen::VectorXd e_u(2);
  e_u << 1.0, 0.0;
  Eigen::VectorXd e_c(2);
  e_c << 0.0, 1.0;
  const Eigen::VectorXd result = EnrichedEmbedding(e_u, {{0.7, e_c}});
  CHECK(result(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result(1) == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("enrichment mixes same and different category donors") {
  Eigen::VectorXd e_u(2);
  e_u << 2.0, 0.0;
  Eigen::VectorXd same(2), diff(2);
  same << 0.0, 1.0;
  diff << 1.0, 1.0;
  const Eigen::VectorXd result =
      EnrichedEmbedding(e_u, {{0.7, same}, {0.3, diff}});
  CHECK(result(0) == doctest::Approx(2.3 / 3.0).epsilon(1e-12));
  CHECK(result(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("no donors leaves the row unchanged") {
  Eigen::VectorXd e_u(3);
  e_u << 1.0, -2.0, 0.5;
  const Eigen::VectorXd result = EnrichedEmbedding(e_u, {});
  CHECK(result == e_u);
}

namespace {

struct EnrichFixture {
  Corpus corpus;
  std::vector<NamedEntity> inventory;
  RnnLmModel model;

  EnrichFixture() {
    // orchard and raffles are rich, simei and changi rare/absent.
    for (int i = 0; i < 12; ++i) {
      corpus.utterances.push_back(
          {"r" + std::to_string(i), {"go", "to", "orchard"}});
      corpus.utterances.push_back(
          {"s" + std::to_string(i), {"meet", "at", "raffles"}});
    }
    corpus.utterances.push_back({"t1", {"simei", "road"}});
    RecountVocabulary(&corpus);
    inventory = {
        {"orchard", NeCategory::kLocation, corpus.TokenCount("orchard")},
        {"raffles", NeCategory::kPerson, corpus.TokenCount("raffles")},
        {"simei", NeCategory::kLocation, corpus.TokenCount("simei")},
    };
    RnnLmHyperparameters hparams;
    hparams.embedding_dim = 4;
    hparams.hidden_dim = 3;
    hparams.epochs = 1;
    hparams.seed = 31;
    model = TrainRnnLm(corpus, hparams);
  }
};

}  // namespace

TEST_CASE("enrichment rewrites only target rows") {
  EnrichFixture fx;
  EnrichmentConfig config;
  config.rr_ne_donors = {"orchard", "raffles"};
  RnnLmModel enriched = EnrichEmbeddings(fx.model, fx.inventory, config);
  CHECK(enriched.enriched);

  const int simei = fx.model.word_to_id.at("simei");
  // Expected row straight from the update rule.
  const int orchard = fx.model.word_to_id.at("orchard");
  const int raffles = fx.model.word_to_id.at("raffles");
  const Eigen::VectorXd expected_in = EnrichedEmbedding(
      fx.model.e_in.row(simei).transpose(),
      {{0.7, fx.model.e_in.row(orchard).transpose()},
       {0.3, fx.model.e_in.row(raffles).transpose()}});
  CHECK((enriched.e_in.row(simei).transpose() - expected_in).norm() == 0.0);
  const Eigen::VectorXd expected_out = EnrichedEmbedding(
      fx.model.e_out.row(simei).transpose(),
      {{0.7, fx.model.e_out.row(orchard).transpose()},
       {0.3, fx.model.e_out.row(raffles).transpose()}});
  CHECK((enriched.e_out.row(simei).transpose() - expected_out).norm() == 0.0);

  // Everything else bit-identical.
  for (int row = 0; row < static_cast<int>(fx.model.vocab.size()); ++row) {
    if (row == simei) continue;
    CHECK((enriched.e_in.row(row) - fx.model.e_in.row(row)).norm() == 0.0);
    CHECK((enriched.e_out.row(row) - fx.model.e_out.row(row)).norm() == 0.0);
  }
  CHECK((enriched.w_x - fx.model.w_x).norm() == 0.0);
  CHECK((enriched.w_h - fx.model.w_h).norm() == 0.0);
  CHECK((enriched.b_h - fx.model.b_h).norm() == 0.0);
  CHECK((enriched.b_o - fx.model.b_o).norm() == 0.0);
}

TEST_CASE("enrichment sides are configurable") {
  EnrichFixture fx;
  EnrichmentConfig config;
  config.rr_ne_donors = {"orchard"};
  const int simei = fx.model.word_to_id.at("simei");

  config.apply_to = EnrichTarget::kInput;
  RnnLmModel input_only = EnrichEmbeddings(fx.model, fx.inventory, config);
  CHECK((input_only.e_in.row(simei) - fx.model.e_in.row(simei)).norm() > 0.0);
  CHECK((input_only.e_out.row(simei) - fx.model.e_out.row(simei)).norm() == 0.0);

  config.apply_to = EnrichTarget::kOutput;
  RnnLmModel output_only = EnrichEmbeddings(fx.model, fx.inventory, config);
  CHECK((output_only.e_in.row(simei) - fx.model.e_in.row(simei)).norm() == 0.0);
  CHECK((output_only.e_out.row(simei) - fx.model.e_out.row(simei)).norm() > 0.0);
}

TEST_CASE("zero weights shrink the target row") {
  EnrichFixture fx;
  EnrichmentConfig config;
  config.rr_ne_donors = {"orchard", "raffles"};
  config.m_same = 0.0;
  config.m_diff = 0.0;
  RnnLmModel enriched = EnrichEmbeddings(fx.model, fx.inventory, config);
  const int simei = fx.model.word_to_id.at("simei");
  const Eigen::VectorXd expected = fx.model.e_in.row(simei).transpose() / 3.0;
  CHECK((enriched.e_in.row(simei).transpose() - expected).norm() == 0.0);
}

TEST_CASE("re-enrichment is rejected") {
  EnrichFixture fx;
  EnrichmentConfig config;
  config.rr_ne_donors = {"orchard"};
  RnnLmModel enriched = EnrichEmbeddings(fx.model, fx.inventory, config);
  CHECK_THROWS_AS(EnrichEmbeddings(enriched, fx.inventory, config),
                  AlreadyEnriched);
}

TEST_CASE("donor validation") {
  EnrichFixture fx;
  EnrichmentConfig config;
  config.rr_ne_donors = {"nowhere"};
  CHECK_THROWS_AS(EnrichEmbeddings(fx.model, fx.inventory, config),
                  DonorNotInVocab);
  config.rr_ne_donors = {"simei"};
  CHECK_THROWS_AS(EnrichEmbeddings(fx.model, fx.inventory, config),
                  DonorNotRR);
  config.rr_ne_donors = {"road"};
  CHECK_THROWS_AS(EnrichEmbeddings(fx.model, fx.inventory, config),
                  DonorNotRR);
}

TEST_CASE("donor selection is seeded and rich-only") {
  std::vector<NamedEntity> inventory;
  for (int i = 0; i < 10; ++i) {
    inventory.push_back({"rich" + std::to_string(i), NeCategory::kCity, 50});
  }
  inventory.push_back({"rare", NeCategory::kCity, 3});
  const auto a = SelectDonors(inventory, 5, 1);
  const auto b = SelectDonors(inventory, 5, 1);
  const auto c = SelectDonors(inventory, 5, 2);
  CHECK(a.size() == 5);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& donor : a) {
    CHECK(donor.rfind("rich", 0) == 0);
  }
  CHECK(SelectDonors(inventory, 50, 1).size() == 10);
}
