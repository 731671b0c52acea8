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

#include "urne/rnnlm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "urne/errors.h"
#include "urne/ngram.h"
#include "urne/rng.h"
#include "urne/text.h"

namespace urne {

namespace {

struct ChunkGradients {
  Eigen::MatrixXd e_in, w_x, w_h, e_out;
  Eigen::VectorXd b_h, b_o;

  explicit ChunkGradients(const RnnLmModel& model)
      : e_in(Eigen::MatrixXd::Zero(model.e_in.rows(), model.e_in.cols())),
        w_x(Eigen::MatrixXd::Zero(model.w_x.rows(), model.w_x.cols())),
        w_h(Eigen::MatrixXd::Zero(model.w_h.rows(), model.w_h.cols())),
        e_out(Eigen::MatrixXd::Zero(model.e_out.rows(), model.e_out.cols())),
        b_h(Eigen::VectorXd::Zero(model.b_h.size())),
        b_o(Eigen::VectorXd::Zero(model.b_o.size())) {}
};

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const double peak = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - peak).exp();
  return p / p.sum();
}

// Forward and backward over one chunk. *hidden carries state in and out
// (detached); gradients accumulate into *grads when non-null. Returns the
// summed cross-entropy loss in nats.
double ChunkForwardBackward(const RnnLmModel& model,
                            const std::vector<int>& inputs,
                            const std::vector<int>& targets,
                            Eigen::VectorXd* hidden, ChunkGradients* grads) {
  const size_t steps = inputs.size();
  std::vector<Eigen::VectorXd> hs(steps);
  std::vector<Eigen::VectorXd> ps(steps);
  Eigen::VectorXd h = *hidden;
  double loss = 0.0;
  for (size_t t = 0; t < steps; ++t) {
    const Eigen::VectorXd x = model.e_in.row(inputs[t]).transpose();
    h = (model.w_x * x + model.w_h * h + model.b_h).array().tanh();
    hs[t] = h;
    const Eigen::VectorXd p = Softmax(model.e_out * h + model.b_o);
    ps[t] = p;
    loss -= std::log(p(targets[t]));
  }
  if (grads != nullptr) {
    Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(model.b_h.size());
    for (size_t t = steps; t-- > 0;) {
      Eigen::VectorXd dlogits = ps[t];
      dlogits(targets[t]) -= 1.0;
      grads->e_out += dlogits * hs[t].transpose();
      grads->b_o += dlogits;
      Eigen::VectorXd dh = model.e_out.transpose() * dlogits + dh_next;
      const Eigen::VectorXd da =
          dh.array() * (1.0 - hs[t].array().square());
      const Eigen::VectorXd x = model.e_in.row(inputs[t]).transpose();
      const Eigen::VectorXd h_prev = t == 0 ? *hidden : hs[t - 1];
      grads->w_x += da * x.transpose();
      grads->w_h += da * h_prev.transpose();
      grads->b_h += da;
      grads->e_in.row(inputs[t]) += (model.w_x.transpose() * da).transpose();
      dh_next = model.w_h.transpose() * da;
    }
  }
  *hidden = h;
  return loss;
}

// inputs[t] predicts targets[t]: <s> w_1 .. w_m feeds in, w_1 .. w_m </s>
// comes out.
void SequenceIds(const RnnLmModel& model, const std::vector<std::string>& tokens,
                 std::vector<int>* inputs, std::vector<int>* targets) {
  inputs->clear();
  targets->clear();
  inputs->push_back(model.word_to_id.at(kSentenceBegin));
  for (const std::string& token : tokens) {
    const int id = model.WordId(token);
    targets->push_back(id);
    inputs->push_back(id);
  }
  targets->push_back(model.word_to_id.at(kSentenceEnd));
}

double CorpusLoss(const RnnLmModel& model, const Corpus& corpus,
                  int64_t* num_targets) {
  double loss = 0.0;
  *num_targets = 0;
  std::vector<int> inputs, targets;
  for (const Utterance& utt : corpus.utterances) {
    SequenceIds(model, utt.tokens, &inputs, &targets);
    Eigen::VectorXd hidden = Eigen::VectorXd::Zero(model.hparams.hidden_dim);
    loss += ChunkForwardBackward(model, inputs, targets, &hidden, nullptr);
    *num_targets += static_cast<int64_t>(targets.size());
  }
  return loss;
}

void FillUniform(Rng* rng, Eigen::MatrixXd* m) {
  for (Eigen::Index r = 0; r < m->rows(); ++r) {
    for (Eigen::Index c = 0; c < m->cols(); ++c) {
      (*m)(r, c) = rng->Uniform(-0.1, 0.1);
    }
  }
}

}  // namespace

int RnnLmModel::WordId(const std::string& word) const {
  auto it = word_to_id.find(word);
  if (it != word_to_id.end()) return it->second;
  return word_to_id.at(kUnknown);
}

double RnnLmModel::SentenceLogProb(
    const std::vector<std::string>& tokens) const {
  std::vector<int> inputs, targets;
  SequenceIds(*this, tokens, &inputs, &targets);
  Eigen::VectorXd hidden = Eigen::VectorXd::Zero(hparams.hidden_dim);
  return -ChunkForwardBackward(*this, inputs, targets, &hidden, nullptr);
}

double RnnSentenceLogProb(const RnnLmModel& model,
                          const std::vector<std::string>& tokens) {
  return model.SentenceLogProb(tokens);
}

Eigen::VectorXd NextWordDistribution(const RnnLmModel& model,
                                     const std::vector<std::string>& prefix) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(model.hparams.hidden_dim);
  std::vector<int> inputs = {model.word_to_id.at(kSentenceBegin)};
  for (const std::string& token : prefix) inputs.push_back(model.WordId(token));
  for (int id : inputs) {
    const Eigen::VectorXd x = model.e_in.row(id).transpose();
    h = (model.w_x * x + model.w_h * h + model.b_h).array().tanh();
  }
  return Softmax(model.e_out * h + model.b_o);
}

double SequenceLossAndGradients(const RnnLmModel& model,
                                const std::vector<std::string>& tokens,
                                RnnGradients* grads) {
  std::vector<int> inputs, targets;
  SequenceIds(model, tokens, &inputs, &targets);
  Eigen::VectorXd hidden = Eigen::VectorXd::Zero(model.hparams.hidden_dim);
  ChunkGradients chunk(model);
  const double loss =
      ChunkForwardBackward(model, inputs, targets, &hidden, &chunk);
  if (grads != nullptr) {
    grads->e_in = std::move(chunk.e_in);
    grads->w_x = std::move(chunk.w_x);
    grads->w_h = std::move(chunk.w_h);
    grads->e_out = std::move(chunk.e_out);
    grads->b_h = std::move(chunk.b_h);
    grads->b_o = std::move(chunk.b_o);
  }
  return loss;
}

RnnLmModel TrainRnnLm(const Corpus& corpus,
                      const RnnLmHyperparameters& hparams) {
  if (corpus.utterances.empty()) throw EmptyCorpus("empty corpus");
  if (hparams.embedding_dim < 1 || hparams.hidden_dim < 1 ||
      hparams.epochs < 0 || hparams.truncation < 1) {
    throw ConfigError("rnnlm hyperparameters out of range");
  }

  RnnLmModel model;
  model.hparams = hparams;
  std::set<std::string> words = {kSentenceBegin, kSentenceEnd, kUnknown};
  for (const Utterance& utt : corpus.utterances) {
    for (const std::string& token : utt.tokens) words.insert(token);
  }
  model.vocab.assign(words.begin(), words.end());
  for (size_t i = 0; i < model.vocab.size(); ++i) {
    model.word_to_id[model.vocab[i]] = static_cast<int>(i);
  }
  const int v = static_cast<int>(model.vocab.size());
  const int d = hparams.embedding_dim;
  const int dh = hparams.hidden_dim;

  Rng rng(hparams.seed);
  model.e_in.resize(v, d);
  model.w_x.resize(dh, d);
  model.w_h.resize(dh, dh);
  model.e_out.resize(v, dh);
  FillUniform(&rng, &model.e_in);
  FillUniform(&rng, &model.w_x);
  FillUniform(&rng, &model.w_h);
  FillUniform(&rng, &model.e_out);
  model.b_h = Eigen::VectorXd::Zero(dh);
  model.b_o = Eigen::VectorXd::Zero(v);

  int64_t num_targets = 0;
  double loss = CorpusLoss(model, corpus, &num_targets);
  if (!std::isfinite(loss)) throw DivergenceDetected("initial loss not finite");
  model.epoch_perplexities.push_back(
      std::exp(loss / static_cast<double>(num_targets)));

  const double lr = hparams.learning_rate;
  std::vector<int> inputs, targets;
  for (int epoch = 1; epoch <= hparams.epochs; ++epoch) {
    for (const Utterance& utt : corpus.utterances) {
      SequenceIds(model, utt.tokens, &inputs, &targets);
      Eigen::VectorXd hidden = Eigen::VectorXd::Zero(dh);
      for (size_t begin = 0; begin < inputs.size();
           begin += static_cast<size_t>(hparams.truncation)) {
        const size_t end = std::min(
            inputs.size(), begin + static_cast<size_t>(hparams.truncation));
        const std::vector<int> chunk_in(inputs.begin() + begin,
                                        inputs.begin() + end);
        const std::vector<int> chunk_tgt(targets.begin() + begin,
                                         targets.begin() + end);
        ChunkGradients grads(model);
        const double chunk_loss =
            ChunkForwardBackward(model, chunk_in, chunk_tgt, &hidden, &grads);
        if (!std::isfinite(chunk_loss)) {
          throw DivergenceDetected("loss not finite in epoch " +
                                   std::to_string(epoch));
        }
        model.e_in -= lr * grads.e_in;
        model.w_x -= lr * grads.w_x;
        model.w_h -= lr * grads.w_h;
        model.b_h -= lr * grads.b_h;
        model.e_out -= lr * grads.e_out;
        model.b_o -= lr * grads.b_o;
      }
    }
    loss = CorpusLoss(model, corpus, &num_targets);
    if (!std::isfinite(loss)) {
      throw DivergenceDetected("loss not finite after epoch " +
                               std::to_string(epoch));
    }
    model.epoch_perplexities.push_back(
        std::exp(loss / static_cast<double>(num_targets)));
  }
  return model;
}

Eigen::VectorXd EnrichedEmbedding(
    const Eigen::VectorXd& e_u,
    const std::vector<std::pair<double, Eigen::VectorXd>>& weighted_donors) {
  Eigen::VectorXd sum = e_u;
  for (const auto& [weight, donor] : weighted_donors) sum += weight * donor;
  return sum / (static_cast<double>(weighted_donors.size()) + 1.0);
}

RnnLmModel EnrichEmbeddings(const RnnLmModel& model,
                            const std::vector<NamedEntity>& inventory,
                            const EnrichmentConfig& config) {
  if (model.enriched) {
    throw AlreadyEnriched("embeddings were already enriched");
  }
  if (config.rr_ne_donors.empty()) throw ConfigError("donor list empty");
  if (!(0.0 <= config.m_diff && config.m_diff <= config.m_same &&
        config.m_same <= 1.0)) {
    throw ConfigError("donor weights must satisfy 0 <= m_diff <= m_same <= 1");
  }

  const CountThresholds thresholds;
  std::map<std::string, const NamedEntity*> by_surface;
  for (const NamedEntity& ne : inventory) by_surface[ne.surface] = &ne;

  std::vector<const NamedEntity*> donors;
  for (const std::string& surface : config.rr_ne_donors) {
    if (model.word_to_id.find(surface) == model.word_to_id.end()) {
      throw DonorNotInVocab(surface);
    }
    auto it = by_surface.find(surface);
    if (it == by_surface.end() ||
        Classify(*it->second, thresholds) != CountClass::kRichlyRepresented) {
      throw DonorNotRR(surface);
    }
    donors.push_back(it->second);
  }

  RnnLmModel enriched_model = model;
  const bool touch_input = config.apply_to != EnrichTarget::kOutput;
  const bool touch_output = config.apply_to != EnrichTarget::kInput;
  for (const NamedEntity& ne : inventory) {
    if (ne.train_count > config.ur_target_max_count) continue;
    if (Classify(ne, thresholds) == CountClass::kRichlyRepresented) continue;
    auto id_it = model.word_to_id.find(ne.surface);
    if (id_it == model.word_to_id.end()) continue;
    const int row = id_it->second;
    if (touch_input) {
      std::vector<std::pair<double, Eigen::VectorXd>> weighted;
      for (const NamedEntity* donor : donors) {
        const double m =
            donor->category == ne.category ? config.m_same : config.m_diff;
        weighted.emplace_back(
            m, model.e_in.row(model.word_to_id.at(donor->surface)).transpose());
      }
      enriched_model.e_in.row(row) =
          EnrichedEmbedding(model.e_in.row(row).transpose(), weighted)
              .transpose();
    }
    if (touch_output) {
      std::vector<std::pair<double, Eigen::VectorXd>> weighted;
      for (const NamedEntity* donor : donors) {
        const double m =
            donor->category == ne.category ? config.m_same : config.m_diff;
        weighted.emplace_back(
            m,
            model.e_out.row(model.word_to_id.at(donor->surface)).transpose());
      }
      enriched_model.e_out.row(row) =
          EnrichedEmbedding(model.e_out.row(row).transpose(), weighted)
              .transpose();
    }
  }
  enriched_model.enriched = true;
  return enriched_model;
}

std::vector<std::string> SelectDonors(
    const std::vector<NamedEntity>& inventory, int num_donors, uint64_t seed,
    const CountThresholds& thresholds) {
  std::vector<std::string> candidates;
  for (const NamedEntity& ne : inventory) {
    if (Classify(ne, thresholds) == CountClass::kRichlyRepresented) {
      candidates.push_back(ne.surface);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  if (candidates.empty()) throw NoRrNes("no richly represented entities");
  Rng rng(ChildSeed(seed, "donors"));
  return rng.SampleWithoutReplacement(
      candidates, std::min<size_t>(num_donors, candidates.size()));
}

namespace {

void WriteMatrix(const Eigen::MatrixXd& m, std::ostream& out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << " ";
      out << FormatExact(m(r, c));
    }
    out << "\n";
  }
}

void WriteVector(const Eigen::VectorXd& v, std::ostream& out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << " ";
    out << FormatExact(v(i));
  }
  out << "\n";
}

class CheckpointReader {
 public:
  explicit CheckpointReader(std::istream& in) : in_(in) {}

  std::string NextLine() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      line = StripCr(std::move(line));
      if (!line.empty() && line[0] == '#') continue;
      return line;
    }
    throw ParseError(line_number_, "unexpected end of checkpoint");
  }

  void Expect(const std::string& want) {
    const std::string got = NextLine();
    if (got != want) throw ParseError(line_number_, "expected " + want);
  }

  void ReadMatrix(Eigen::MatrixXd* m) {
    for (Eigen::Index r = 0; r < m->rows(); ++r) {
      const std::vector<std::string> fields = SplitWhitespace(NextLine());
      if (fields.size() != static_cast<size_t>(m->cols())) {
        throw ParseError(line_number_, "wrong matrix row width");
      }
      for (Eigen::Index c = 0; c < m->cols(); ++c) {
        const auto value = ParseDouble(fields[c]);
        if (!value) throw ParseError(line_number_, "bad number: " + fields[c]);
        (*m)(r, c) = *value;
      }
    }
  }

  void ReadVector(Eigen::VectorXd* v) {
    const std::vector<std::string> fields = SplitWhitespace(NextLine());
    if (fields.size() != static_cast<size_t>(v->size())) {
      throw ParseError(line_number_, "wrong vector width");
    }
    for (Eigen::Index i = 0; i < v->size(); ++i) {
      const auto value = ParseDouble(fields[i]);
      if (!value) throw ParseError(line_number_, "bad number: " + fields[i]);
      (*v)(i) = *value;
    }
  }

  int line_number() const { return line_number_; }

 private:
  std::istream& in_;
  int line_number_ = 0;
};

}  // namespace

void WriteRnnLm(const RnnLmModel& model, std::ostream& out) {
  out << "rnnlm 1\n";
  out << "vocab " << model.vocab.size() << "\n";
  out << "dims " << model.hparams.embedding_dim << " "
      << model.hparams.hidden_dim << "\n";
  out << "lr " << FormatExact(model.hparams.learning_rate) << "\n";
  out << "epochs " << model.hparams.epochs << "\n";
  out << "truncation " << model.hparams.truncation << "\n";
  out << "seed " << model.hparams.seed << "\n";
  out << "enriched " << (model.enriched ? 1 : 0) << "\n";
  out << "\\words\n";
  for (const std::string& word : model.vocab) out << word << "\n";
  out << "\\perplexities\n";
  for (size_t i = 0; i < model.epoch_perplexities.size(); ++i) {
    if (i > 0) out << " ";
    out << FormatExact(model.epoch_perplexities[i]);
  }
  out << "\n";
  out << "\\e_in\n";
  WriteMatrix(model.e_in, out);
  out << "\\w_x\n";
  WriteMatrix(model.w_x, out);
  out << "\\w_h\n";
  WriteMatrix(model.w_h, out);
  out << "\\b_h\n";
  WriteVector(model.b_h, out);
  out << "\\e_out\n";
  WriteMatrix(model.e_out, out);
  out << "\\b_o\n";
  WriteVector(model.b_o, out);
  out << "\\end\n";
}

RnnLmModel ReadRnnLm(std::istream& in) {
  CheckpointReader reader(in);
  RnnLmModel model;

  auto expect_field = [&](const std::string& key) -> std::vector<std::string> {
    const std::vector<std::string> fields = SplitWhitespace(reader.NextLine());
    if (fields.empty() || fields[0] != key) {
      throw ParseError(reader.line_number(), "expected field " + key);
    }
    return fields;
  };

  auto fields = expect_field("rnnlm");
  if (fields.size() != 2 || fields[1] != "1") {
    throw ParseError(reader.line_number(), "unsupported checkpoint version");
  }
  fields = expect_field("vocab");
  const auto vocab_size = fields.size() == 2 ? ParseInt(fields[1]) : std::nullopt;
  if (!vocab_size || *vocab_size < 3) {
    throw ParseError(reader.line_number(), "bad vocab size");
  }
  fields = expect_field("dims");
  const auto d = fields.size() == 3 ? ParseInt(fields[1]) : std::nullopt;
  const auto dh = fields.size() == 3 ? ParseInt(fields[2]) : std::nullopt;
  if (!d || !dh || *d < 1 || *dh < 1) {
    throw ParseError(reader.line_number(), "bad dims");
  }
  model.hparams.embedding_dim = static_cast<int>(*d);
  model.hparams.hidden_dim = static_cast<int>(*dh);
  fields = expect_field("lr");
  const auto lr = fields.size() == 2 ? ParseDouble(fields[1]) : std::nullopt;
  if (!lr) throw ParseError(reader.line_number(), "bad lr");
  model.hparams.learning_rate = *lr;
  fields = expect_field("epochs");
  const auto epochs = fields.size() == 2 ? ParseInt(fields[1]) : std::nullopt;
  if (!epochs) throw ParseError(reader.line_number(), "bad epochs");
  model.hparams.epochs = static_cast<int>(*epochs);
  fields = expect_field("truncation");
  const auto trunc = fields.size() == 2 ? ParseInt(fields[1]) : std::nullopt;
  if (!trunc) throw ParseError(reader.line_number(), "bad truncation");
  model.hparams.truncation = static_cast<int>(*trunc);
  fields = expect_field("seed");
  const auto seed = fields.size() == 2 ? ParseUint(fields[1]) : std::nullopt;
  if (!seed) throw ParseError(reader.line_number(), "bad seed");
  model.hparams.seed = *seed;
  fields = expect_field("enriched");
  if (fields.size() != 2 || (fields[1] != "0" && fields[1] != "1")) {
    throw ParseError(reader.line_number(), "bad enriched flag");
  }
  model.enriched = fields[1] == "1";

  reader.Expect("\\words");
  for (int64_t i = 0; i < *vocab_size; ++i) {
    const std::string word = reader.NextLine();
    if (word.empty()) throw ParseError(reader.line_number(), "empty word");
    model.vocab.push_back(word);
    model.word_to_id[word] = static_cast<int>(i);
  }
  if (model.word_to_id.size() != static_cast<size_t>(*vocab_size)) {
    throw ParseError(reader.line_number(), "duplicate vocabulary word");
  }
  for (const char* symbol : {kSentenceBegin, kSentenceEnd, kUnknown}) {
    if (model.word_to_id.find(symbol) == model.word_to_id.end()) {
      throw ParseError(reader.line_number(),
                       std::string("vocabulary lacks ") + symbol);
    }
  }

  reader.Expect("\\perplexities");
  for (const std::string& field : SplitWhitespace(reader.NextLine())) {
    const auto value = ParseDouble(field);
    if (!value) throw ParseError(reader.line_number(), "bad perplexity");
    model.epoch_perplexities.push_back(*value);
  }

  const int v = static_cast<int>(*vocab_size);
  model.e_in.resize(v, model.hparams.embedding_dim);
  model.w_x.resize(model.hparams.hidden_dim, model.hparams.embedding_dim);
  model.w_h.resize(model.hparams.hidden_dim, model.hparams.hidden_dim);
  model.b_h.resize(model.hparams.hidden_dim);
  model.e_out.resize(v, model.hparams.hidden_dim);
  model.b_o.resize(v);
  reader.Expect("\\e_in");
  reader.ReadMatrix(&model.e_in);
  reader.Expect("\\w_x");
  reader.ReadMatrix(&model.w_x);
  reader.Expect("\\w_h");
  reader.ReadMatrix(&model.w_h);
  reader.Expect("\\b_h");
  reader.ReadVector(&model.b_h);
  reader.Expect("\\e_out");
  reader.ReadMatrix(&model.e_out);
  reader.Expect("\\b_o");
  reader.ReadVector(&model.b_o);
  reader.Expect("\\end");
  return model;
}

void WriteRnnLmFile(const RnnLmModel& model, const std::string& path,
                    const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteRnnLm(model, out);
}

RnnLmModel ReadRnnLmFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  return ReadRnnLm(in);
}

}  // namespace urne
