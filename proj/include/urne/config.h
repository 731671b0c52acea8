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

#ifndef URNE_CONFIG_H_
#define URNE_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "urne/benchmark.h"
#include "urne/corpus.h"
#include "urne/exemplar.h"
#include "urne/rescore.h"
#include "urne/rnnlm.h"
#include "urne/simdecode.h"

namespace urne {

// One config drives every command. The file format is flat "key = value"
// under [section] headers; a key on the command line ("section.key=value")
// overrides the file. Unknown keys are errors so typos cannot silently fall
// back to defaults.
struct PipelineConfig {
  std::string train_path;
  std::string test_path;
  std::string inventory_path;
  std::string lattice_dir;
  std::string model_dir;
  std::string out_dir = "out";

  BenchmarkConfig benchmark;
  ExemplarConfig exemplar;
  EnrichmentConfig enrichment;
  int num_donors = 5;
  RnnLmHyperparameters rnn;
  ConfusionParams confusion;
  SimConfig sim;
  RescoreConfig rescore;
  CountThresholds thresholds;
  int ngram_order = 3;
  int sweep_seeds = 5;
  uint64_t seed = 0;
  int jobs = 1;

  PipelineConfig();
};

// Throws ConfigError on unknown keys or unparsable values. key is
// "section.key".
void ApplyConfigValue(PipelineConfig* config, const std::string& key,
                      const std::string& value);

void LoadConfig(std::istream& in, PipelineConfig* config);
void LoadConfigFile(const std::string& path, PipelineConfig* config);

// Canonical dump: every key in a fixed order, parseable by LoadConfig, and
// the byte string behind ConfigHash.
std::string SerializeConfig(const PipelineConfig& config);
void WriteConfigFile(const PipelineConfig& config, const std::string& path,
                     const std::string& header = "");

uint64_t ConfigHash(const PipelineConfig& config);
std::string ConfigHashHex(const PipelineConfig& config);

// Comment block stamped on every output file: command, config hash, seed,
// and the stage plan when one applies.
std::string ProvenanceHeader(const PipelineConfig& config,
                             const std::string& command,
                             const std::string& plan = "");

}  // namespace urne

#endif  // URNE_CONFIG_H_
