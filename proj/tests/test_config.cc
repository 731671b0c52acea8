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

#include "urne/config.h"

#include <sstream>
#include <string>

#include "doctest.h"
#include "urne/errors.h"

namespace urne {
namespace {

TEST_CASE("defaults are the benchmark-scale settings") {
  PipelineConfig config;
  CHECK(config.exemplar.num_rr_nes == 78);
  CHECK(config.exemplar.utts_per_rr_ne == 30);
  CHECK(config.exemplar.exemplars_per_ur_ne == 10);
  CHECK(config.exemplar.ur_boost_max_count == 9);
  CHECK(config.sim.beam == doctest::Approx(2.5));
  CHECK(config.sim.max_arcs_per_slot == 6);
  CHECK(config.rescore.nbest_n == 50);
  CHECK(config.rescore.neural_interp_lambda == doctest::Approx(0.5));
  CHECK(config.thresholds.ur_max == 9);
  CHECK(config.thresholds.rr_min == 10);
  CHECK(config.ngram_order == 3);
  CHECK(config.num_donors == 5);
}

TEST_CASE("config files parse sections, comments, and overrides") {
  std::istringstream in(
      "# a comment\n"
      "[sim]\n"
      "beam = 1.25\n"
      "max_arcs_per_slot=4\n"
      "\n"
      "[paths]\n"
      "train = data/train.txt\n"
      "[run]\n"
      "seed = 42\n"
      "jobs = 3\n"
      "[scales]\n"
      "lm = 0.8\n");
  PipelineConfig config;
  LoadConfig(in, &config);
  CHECK(config.sim.beam == doctest::Approx(1.25));
  CHECK(config.sim.max_arcs_per_slot == 4);
  CHECK(config.train_path == "data/train.txt");
  CHECK(config.seed == 42);
  CHECK(config.jobs == 3);
  CHECK(config.sim.scales.lm_scale == doctest::Approx(0.8));
  CHECK(config.rescore.scales.lm_scale == doctest::Approx(0.8));

  ApplyConfigValue(&config, "sim.beam", "9.5");
  CHECK(config.sim.beam == doctest::Approx(9.5));
}

TEST_CASE("unknown keys and bad values are rejected") {
  PipelineConfig config;
  CHECK_THROWS_AS(ApplyConfigValue(&config, "sim.bean", "1.0"), ConfigError);
  CHECK_THROWS_AS(ApplyConfigValue(&config, "sim.beam", "wide"), ConfigError);
  CHECK_THROWS_AS(ApplyConfigValue(&config, "enrichment.apply_to", "middle"),
                  ConfigError);

  std::istringstream bad_line("[sim]\nbeam 2.0\n");
  CHECK_THROWS_AS(LoadConfig(bad_line, &config), ConfigError);
  std::istringstream bad_section("[sim\nbeam = 2.0\n");
  CHECK_THROWS_AS(LoadConfig(bad_section, &config), ConfigError);

  std::istringstream unknown("[sim]\nbean = 2.0\n");
  try {
    LoadConfig(unknown, &config);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("apply_to parses all three values") {
  PipelineConfig config;
  ApplyConfigValue(&config, "enrichment.apply_to", "input");
  CHECK(config.enrichment.apply_to == EnrichTarget::kInput);
  ApplyConfigValue(&config, "enrichment.apply_to", "output");
  CHECK(config.enrichment.apply_to == EnrichTarget::kOutput);
  ApplyConfigValue(&config, "enrichment.apply_to", "both");
  CHECK(config.enrichment.apply_to == EnrichTarget::kBoth);
}

TEST_CASE("serialization round-trips byte-exactly") {
  PipelineConfig config;
  config.train_path = "x/train.txt";
  config.sim.beam = 0.125;
  config.rescore.neural_interp_lambda = 0.3;
  config.seed = 7;

  std::string dump = SerializeConfig(config);
  PipelineConfig parsed;
  std::istringstream in(dump);
  LoadConfig(in, &parsed);
  CHECK(SerializeConfig(parsed) == dump);
  CHECK(ConfigHash(parsed) == ConfigHash(config));
}

TEST_CASE("hash tracks value changes") {
  PipelineConfig a;
  PipelineConfig b;
  CHECK(ConfigHash(a) == ConfigHash(b));
  ApplyConfigValue(&b, "sim.beam", "2.5000001");
  CHECK(ConfigHash(a) != ConfigHash(b));
  CHECK(ConfigHashHex(a).size() == 16);
}

TEST_CASE("provenance headers carry command, hash, seed, and plan") {
  PipelineConfig config;
  config.seed = 13;
  std::string header = ProvenanceHeader(config, "rescore", "neural_rescore");
  CHECK(header.find("# urne rescore\n") != std::string::npos);
  CHECK(header.find("# config " + ConfigHashHex(config)) != std::string::npos);
  CHECK(header.find("# seed 13\n") != std::string::npos);
  CHECK(header.find("# plan neural_rescore\n") != std::string::npos);
  for (std::istringstream in(header); !in.eof();) {
    std::string line;
    if (!std::getline(in, line)) break;
    CHECK(line.rfind("#", 0) == 0);
  }

  std::string bare = ProvenanceHeader(config, "stats");
  CHECK(bare.find("# plan") == std::string::npos);
}

}  // namespace
}  // namespace urne
