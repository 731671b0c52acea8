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

#ifndef URNE_ERRORS_H_
#define URNE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace urne {

// Base type for all toolkit errors. Subclasses carry no extra state beyond
// the message; catch sites dispatch on type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class CycleDetected : public Error {
 public:
  explicit CycleDetected(const std::string& msg) : Error(msg) {}
};

class EmptyLattice : public Error {
 public:
  explicit EmptyLattice(const std::string& msg) : Error(msg) {}
};

// Line numbers are 1-based and refer to the stream being parsed.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class DuplicateUtteranceId : public Error {
 public:
  explicit DuplicateUtteranceId(const std::string& id)
      : Error("duplicate utterance id: " + id) {}
};

class EmptyCorpus : public Error {
 public:
  explicit EmptyCorpus(const std::string& msg) : Error(msg) {}
};

class UnknownCategory : public ParseError {
 public:
  UnknownCategory(int line, const std::string& category)
      : ParseError(line, "unknown NE category: " + category) {}
};

class InvalidThresholds : public Error {
 public:
  explicit InvalidThresholds(const std::string& msg) : Error(msg) {}
};

class NoRrNes : public Error {
 public:
  explicit NoRrNes(const std::string& msg) : Error(msg) {}
};

class SectionCountMismatch : public Error {
 public:
  explicit SectionCountMismatch(const std::string& msg) : Error(msg) {}
};

class DivergenceDetected : public Error {
 public:
  explicit DivergenceDetected(const std::string& msg) : Error(msg) {}
};

class DonorNotInVocab : public Error {
 public:
  explicit DonorNotInVocab(const std::string& word)
      : Error("enrichment donor not in vocabulary: " + word) {}
};

class DonorNotRR : public Error {
 public:
  explicit DonorNotRR(const std::string& word)
      : Error("enrichment donor is not richly represented: " + word) {}
};

class AlreadyEnriched : public Error {
 public:
  explicit AlreadyEnriched(const std::string& msg) : Error(msg) {}
};

class EmptyReference : public Error {
 public:
  explicit EmptyReference(const std::string& msg) : Error(msg) {}
};

class MissingLattice : public Error {
 public:
  explicit MissingLattice(const std::string& utterance_id)
      : Error("no lattice for utterance: " + utterance_id) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace urne

#endif  // URNE_ERRORS_H_
