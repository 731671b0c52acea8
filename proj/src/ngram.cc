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

#include "urne/ngram.h"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "urne/errors.h"
#include "urne/text.h"

namespace urne {

namespace {

constexpr double kSentenceBeginLogProb = -99.0;

std::string JoinGram(const std::vector<std::string>& tokens, size_t begin,
                     size_t end) {
  std::string key;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) key.push_back(' ');
    key += tokens[i];
  }
  return key;
}

bool IsReserved(const std::string& token) {
  return token == kSentenceBegin || token == kSentenceEnd;
}

}  // namespace

bool NGramModel::InVocab(const std::string& word) const {
  return !tables.empty() && tables[0].count(word) > 0;
}

double NGramModel::LogProb(const std::vector<std::string>& history,
                           const std::string& word) const {
  std::vector<std::string> h;
  const size_t max_history = static_cast<size_t>(order) - 1;
  const size_t start =
      history.size() > max_history ? history.size() - max_history : 0;
  for (size_t i = start; i < history.size(); ++i) {
    h.push_back(InVocab(history[i]) ? history[i] : kUnknown);
  }
  std::string w = InVocab(word) ? word : kUnknown;

  double backoff = 0.0;
  while (true) {
    std::string key = JoinGram(h, 0, h.size());
    if (!key.empty()) key.push_back(' ');
    key += w;
    const auto& table = tables[h.size()];
    auto it = table.find(key);
    if (it != table.end()) return backoff + it->second.logprob;
    if (h.empty()) return backoff + tables[0].at(std::string(kUnknown)).logprob;
    auto ctx = tables[h.size() - 1].find(JoinGram(h, 0, h.size()));
    if (ctx != tables[h.size() - 1].end() && ctx->second.has_bow) {
      backoff += ctx->second.logbow;
    }
    h.erase(h.begin());
  }
}

double NGramModel::SentenceLogProb(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> history = {kSentenceBegin};
  double total = 0.0;
  for (const std::string& token : tokens) {
    total += LogProb(history, token);
    history.push_back(token);
  }
  total += LogProb(history, kSentenceEnd);
  return total;
}

std::vector<std::string> NGramModel::Vocabulary() const {
  std::vector<std::string> words;
  if (tables.empty()) return words;
  for (const auto& [word, entry] : tables[0]) {
    (void)entry;
    words.push_back(word);
  }
  return words;
}

NGramModel TrainNGram(const Corpus& corpus, int order, Smoothing smoothing) {
  (void)smoothing;
  if (corpus.utterances.empty()) throw EmptyCorpus("empty corpus");
  if (order < 1) throw ConfigError("ngram order must be >= 1");

  // counts[k-1]: event k-grams, one window per predicted position.
  std::vector<std::map<std::string, int64_t>> counts(order);
  for (const Utterance& utt : corpus.utterances) {
    std::vector<std::string> padded = {kSentenceBegin};
    for (const std::string& token : utt.tokens) {
      if (IsReserved(token)) continue;
      padded.push_back(token);
    }
    padded.push_back(kSentenceEnd);
    for (size_t i = 1; i < padded.size(); ++i) {
      for (int k = 1; k <= order && static_cast<size_t>(k) <= i + 1; ++k) {
        ++counts[k - 1][JoinGram(padded, i + 1 - k, i + 1)];
      }
    }
  }

  // Context totals and distinct continuation types. The empty context is
  // keyed by "".
  std::vector<std::map<std::string, int64_t>> context_total(order);
  std::vector<std::map<std::string, int64_t>> context_types(order);
  for (int k = 1; k <= order; ++k) {
    for (const auto& [gram, count] : counts[k - 1]) {
      const size_t cut = gram.rfind(' ');
      const std::string ctx =
          cut == std::string::npos ? "" : gram.substr(0, cut);
      context_total[k - 1][ctx] += count;
      context_types[k - 1][ctx] += 1;
    }
  }

  const int64_t predicted_types = context_types[0].at("");
  int64_t vocab_size = predicted_types;
  if (counts[0].count(kUnknown) == 0) ++vocab_size;
  const double uniform = 1.0 / static_cast<double>(vocab_size);

  NGramModel model;
  model.order = order;
  model.tables.resize(order);

  // Interpolated Witten-Bell, filled lowest order first so each level can
  // read its back-off distribution from the level below.
  std::map<std::string, double> lower;  // linear probs, order k-1
  for (int k = 1; k <= order; ++k) {
    std::map<std::string, double> current;
    std::set<std::string> grams;
    for (const auto& [gram, count] : counts[k - 1]) {
      (void)count;
      grams.insert(gram);
    }
    if (k == 1) {
      grams.insert(kUnknown);
      grams.insert(kSentenceBegin);
    }
    for (const std::string& gram : grams) {
      double prob;
      if (k == 1 && gram == kSentenceBegin) {
        prob = std::pow(10.0, kSentenceBeginLogProb);
      } else {
        const size_t cut = gram.rfind(' ');
        const std::string ctx =
            cut == std::string::npos ? "" : gram.substr(0, cut);
        auto count_it = counts[k - 1].find(gram);
        const double c = count_it == counts[k - 1].end()
                             ? 0.0
                             : static_cast<double>(count_it->second);
        const double ctx_total =
            static_cast<double>(context_total[k - 1].at(ctx));
        const double types =
            static_cast<double>(context_types[k - 1].at(ctx));
        double back;
        if (k == 1) {
          back = uniform;
        } else {
          back = lower.at(gram.substr(gram.find(' ') + 1));
        }
        prob = (c + types * back) / (ctx_total + types);
      }
      current[gram] = prob;
      NGramEntry entry;
      entry.logprob = std::log10(prob);
      model.tables[k - 1][gram] = entry;
    }
    lower = std::move(current);
  }

  // Back-off weights for every stored k-gram that contextualizes events one
  // order up.
  for (int k = 1; k < order; ++k) {
    for (auto& [gram, entry] : model.tables[k - 1]) {
      auto total_it = context_total[k].find(gram);
      if (total_it == context_total[k].end()) continue;
      const double types = static_cast<double>(context_types[k].at(gram));
      entry.logbow = std::log10(
          types / (static_cast<double>(total_it->second) + types));
      entry.has_bow = true;
    }
  }
  return model;
}

void WriteArpa(const NGramModel& model, std::ostream& out) {
  out << "\\data\\\n";
  for (int k = 1; k <= model.order; ++k) {
    out << "ngram " << k << "=" << model.tables[k - 1].size() << "\n";
  }
  for (int k = 1; k <= model.order; ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const auto& [gram, entry] : model.tables[k - 1]) {
      out << FormatFixed(entry.logprob, 12) << "\t" << gram;
      if (entry.has_bow) out << "\t" << FormatFixed(entry.logbow, 12);
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
}

namespace {

class ArpaReader {
 public:
  explicit ArpaReader(std::istream& in) : in_(in) {}

  // Fetches the next line, skipping comments. Returns false at EOF.
  bool Next() {
    if (has_pending_) {
      has_pending_ = false;
      return true;
    }
    while (std::getline(in_, line_)) {
      ++line_number_;
      line_ = StripCr(std::move(line_));
      if (!line_.empty() && line_[0] == '#') continue;
      return true;
    }
    return false;
  }

  void PushBack() { has_pending_ = true; }

  const std::string& line() const { return line_; }
  int line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::string line_;
  int line_number_ = 0;
  bool has_pending_ = false;
};

}  // namespace

NGramModel ReadArpa(std::istream& in) {
  ArpaReader reader(in);

  while (true) {
    if (!reader.Next()) {
      throw ParseError(reader.line_number(), "missing \\data\\ header");
    }
    if (reader.line() == "\\data\\") break;
    if (!reader.line().empty()) {
      throw ParseError(reader.line_number(), "expected \\data\\ header");
    }
  }

  std::vector<int64_t> declared;
  while (reader.Next() && !reader.line().empty()) {
    std::istringstream fields(reader.line());
    std::string tag, spec;
    fields >> tag >> spec;
    const size_t eq = spec.find('=');
    std::optional<int64_t> k, n;
    if (eq != std::string::npos) {
      k = ParseInt(spec.substr(0, eq));
      n = ParseInt(spec.substr(eq + 1));
    }
    if (tag != "ngram" || !k || !n || *k < 1 || *n < 0) {
      throw ParseError(reader.line_number(),
                       "bad ngram count line: " + reader.line());
    }
    if (static_cast<size_t>(*k) != declared.size() + 1) {
      throw ParseError(reader.line_number(), "ngram counts out of order");
    }
    declared.push_back(*n);
  }
  if (declared.empty()) {
    throw ParseError(reader.line_number(), "no ngram counts");
  }

  NGramModel model;
  model.order = static_cast<int>(declared.size());
  model.tables.resize(model.order);

  for (int section = 1; section <= model.order; ++section) {
    std::string want = "\\" + std::to_string(section) + "-grams:";
    while (true) {
      if (!reader.Next()) {
        throw ParseError(reader.line_number(), "expected " + want);
      }
      if (reader.line().empty()) continue;
      if (reader.line() != want) {
        throw ParseError(reader.line_number(), "expected " + want);
      }
      break;
    }
    auto& table = model.tables[section - 1];
    while (reader.Next()) {
      if (reader.line().empty()) continue;
      if (reader.line()[0] == '\\') {
        reader.PushBack();
        break;
      }
      const std::vector<std::string> fields = SplitChar(reader.line(), '\t');
      if (fields.size() != 2 && fields.size() != 3) {
        throw ParseError(reader.line_number(),
                         "bad n-gram line: " + reader.line());
      }
      NGramEntry entry;
      const auto logprob = ParseDouble(fields[0]);
      if (!logprob) {
        throw ParseError(reader.line_number(),
                         "bad log probability: " + fields[0]);
      }
      entry.logprob = *logprob;
      const std::vector<std::string> words = SplitWhitespace(fields[1]);
      if (words.size() != static_cast<size_t>(section)) {
        throw ParseError(reader.line_number(),
                         "wrong n-gram order: " + fields[1]);
      }
      if (fields.size() == 3) {
        const auto logbow = ParseDouble(fields[2]);
        if (!logbow) {
          throw ParseError(reader.line_number(),
                           "bad back-off weight: " + fields[2]);
        }
        entry.logbow = *logbow;
        entry.has_bow = true;
      }
      if (!table.emplace(JoinTokens(words), entry).second) {
        throw ParseError(reader.line_number(), "duplicate n-gram: " + fields[1]);
      }
    }
    if (table.size() != static_cast<size_t>(declared[section - 1])) {
      throw SectionCountMismatch(
          "section " + std::to_string(section) + " declares " +
          std::to_string(declared[section - 1]) + " entries, found " +
          std::to_string(table.size()));
    }
  }

  if (!reader.Next() || reader.line() != "\\end\\") {
    throw ParseError(reader.line_number(), "missing \\end\\");
  }
  if (model.tables[0].count(kUnknown) == 0) {
    throw ParseError(reader.line_number(), "model lacks the unknown symbol");
  }
  return model;
}

void WriteArpaFile(const NGramModel& model, const std::string& path,
                   const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteArpa(model, out);
}

NGramModel ReadArpaFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  return ReadArpa(in);
}

}  // namespace urne
