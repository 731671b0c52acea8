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

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <vector>

#include "urne/errors.h"
#include "urne/rng.h"
#include "urne/text.h"

namespace urne {

namespace {

std::string Trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

struct KeyIO {
  std::string key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<bool(PipelineConfig*, const std::string&)> set;
};

KeyIO StringKey(const std::string& key, std::string PipelineConfig::*field) {
  return {key, [field](const PipelineConfig& c) { return c.*field; },
          [field](PipelineConfig* c, const std::string& v) {
            c->*field = v;
            return true;
          }};
}

template <typename T>
KeyIO NarrowIntKey(const std::string& key,
                   std::function<T&(PipelineConfig&)> ref) {
  return {key,
          [ref](const PipelineConfig& c) {
            return std::to_string(ref(const_cast<PipelineConfig&>(c)));
          },
          [ref](PipelineConfig* c, const std::string& v) {
            auto parsed = ParseInt(v);
            if (!parsed) return false;
            ref(*c) = static_cast<T>(*parsed);
            return true;
          }};
}

KeyIO DoubleKey(const std::string& key,
                std::function<double&(PipelineConfig&)> ref) {
  return {key,
          [ref](const PipelineConfig& c) {
            return FormatExact(ref(const_cast<PipelineConfig&>(c)));
          },
          [ref](PipelineConfig* c, const std::string& v) {
            auto parsed = ParseDouble(v);
            if (!parsed) return false;
            ref(*c) = *parsed;
            return true;
          }};
}

const char* ApplyToName(EnrichTarget target) {
  switch (target) {
    case EnrichTarget::kInput: return "input";
    case EnrichTarget::kOutput: return "output";
    case EnrichTarget::kBoth: return "both";
  }
  return "both";
}

std::vector<KeyIO> BuildKeys() {
  std::vector<KeyIO> keys;
  keys.push_back(StringKey("paths.train", &PipelineConfig::train_path));
  keys.push_back(StringKey("paths.test", &PipelineConfig::test_path));
  keys.push_back(StringKey("paths.inventory", &PipelineConfig::inventory_path));
  keys.push_back(StringKey("paths.lattice_dir", &PipelineConfig::lattice_dir));
  keys.push_back(StringKey("paths.model_dir", &PipelineConfig::model_dir));
  keys.push_back(StringKey("paths.out_dir", &PipelineConfig::out_dir));

  keys.push_back(NarrowIntKey<int>("benchmark.rr_per_category",
      [](PipelineConfig& c) -> int& { return c.benchmark.rr_per_category; }));
  keys.push_back(NarrowIntKey<int>("benchmark.ur_per_category",
      [](PipelineConfig& c) -> int& { return c.benchmark.ur_per_category; }));
  keys.push_back(NarrowIntKey<int>("benchmark.train_utts_per_rr_ne",
      [](PipelineConfig& c) -> int& { return c.benchmark.train_utts_per_rr_ne; }));
  keys.push_back(NarrowIntKey<int>("benchmark.test_utts_per_ur_ne",
      [](PipelineConfig& c) -> int& { return c.benchmark.test_utts_per_ur_ne; }));
  keys.push_back(NarrowIntKey<int>("benchmark.templates_per_ne",
      [](PipelineConfig& c) -> int& { return c.benchmark.templates_per_ne; }));
  keys.push_back(NarrowIntKey<int>("benchmark.filler_test_utts",
      [](PipelineConfig& c) -> int& { return c.benchmark.filler_test_utts; }));

  keys.push_back(NarrowIntKey<int>("exemplar.num_rr_nes",
      [](PipelineConfig& c) -> int& { return c.exemplar.num_rr_nes; }));
  keys.push_back(NarrowIntKey<int>("exemplar.utts_per_rr_ne",
      [](PipelineConfig& c) -> int& { return c.exemplar.utts_per_rr_ne; }));
  keys.push_back(NarrowIntKey<int>("exemplar.exemplars_per_ur_ne",
      [](PipelineConfig& c) -> int& { return c.exemplar.exemplars_per_ur_ne; }));
  keys.push_back(NarrowIntKey<int>("exemplar.ur_boost_max_count",
      [](PipelineConfig& c) -> int& { return c.exemplar.ur_boost_max_count; }));

  keys.push_back(NarrowIntKey<int64_t>("enrichment.ur_target_max_count",
      [](PipelineConfig& c) -> int64_t& { return c.enrichment.ur_target_max_count; }));
  keys.push_back(DoubleKey("enrichment.m_same",
      [](PipelineConfig& c) -> double& { return c.enrichment.m_same; }));
  keys.push_back(DoubleKey("enrichment.m_diff",
      [](PipelineConfig& c) -> double& { return c.enrichment.m_diff; }));
  keys.push_back(
      {"enrichment.apply_to",
       [](const PipelineConfig& c) {
         return std::string(ApplyToName(c.enrichment.apply_to));
       },
       [](PipelineConfig* c, const std::string& v) {
         if (v == "input") c->enrichment.apply_to = EnrichTarget::kInput;
         else if (v == "output") c->enrichment.apply_to = EnrichTarget::kOutput;
         else if (v == "both") c->enrichment.apply_to = EnrichTarget::kBoth;
         else return false;
         return true;
       }});
  keys.push_back(NarrowIntKey<int>("enrichment.num_donors",
      [](PipelineConfig& c) -> int& { return c.num_donors; }));

  keys.push_back(NarrowIntKey<int>("rnnlm.embedding_dim",
      [](PipelineConfig& c) -> int& { return c.rnn.embedding_dim; }));
  keys.push_back(NarrowIntKey<int>("rnnlm.hidden_dim",
      [](PipelineConfig& c) -> int& { return c.rnn.hidden_dim; }));
  keys.push_back(DoubleKey("rnnlm.learning_rate",
      [](PipelineConfig& c) -> double& { return c.rnn.learning_rate; }));
  keys.push_back(NarrowIntKey<int>("rnnlm.epochs",
      [](PipelineConfig& c) -> int& { return c.rnn.epochs; }));
  keys.push_back(NarrowIntKey<int>("rnnlm.truncation",
      [](PipelineConfig& c) -> int& { return c.rnn.truncation; }));

  keys.push_back(DoubleKey("confusion.ned_threshold",
      [](PipelineConfig& c) -> double& { return c.confusion.ned_threshold; }));
  keys.push_back(DoubleKey("confusion.penalty",
      [](PipelineConfig& c) -> double& { return c.confusion.penalty; }));
  keys.push_back(DoubleKey("confusion.noise_scale",
      [](PipelineConfig& c) -> double& { return c.confusion.noise_scale; }));

  keys.push_back(DoubleKey("sim.beam",
      [](PipelineConfig& c) -> double& { return c.sim.beam; }));
  keys.push_back(NarrowIntKey<int>("sim.max_arcs_per_slot",
      [](PipelineConfig& c) -> int& { return c.sim.max_arcs_per_slot; }));

  keys.push_back(
      {"scales.acoustic",
       [](const PipelineConfig& c) {
         return FormatExact(c.sim.scales.acoustic_scale);
       },
       [](PipelineConfig* c, const std::string& v) {
         auto parsed = ParseDouble(v);
         if (!parsed) return false;
         c->sim.scales.acoustic_scale = *parsed;
         c->rescore.scales.acoustic_scale = *parsed;
         return true;
       }});
  keys.push_back(
      {"scales.lm",
       [](const PipelineConfig& c) { return FormatExact(c.sim.scales.lm_scale); },
       [](PipelineConfig* c, const std::string& v) {
         auto parsed = ParseDouble(v);
         if (!parsed) return false;
         c->sim.scales.lm_scale = *parsed;
         c->rescore.scales.lm_scale = *parsed;
         return true;
       }});

  keys.push_back(NarrowIntKey<int>("rescore.nbest_n",
      [](PipelineConfig& c) -> int& { return c.rescore.nbest_n; }));
  keys.push_back(DoubleKey("rescore.neural_interp_lambda",
      [](PipelineConfig& c) -> double& { return c.rescore.neural_interp_lambda; }));

  keys.push_back(NarrowIntKey<int64_t>("thresholds.ur_max",
      [](PipelineConfig& c) -> int64_t& { return c.thresholds.ur_max; }));
  keys.push_back(NarrowIntKey<int64_t>("thresholds.rr_min",
      [](PipelineConfig& c) -> int64_t& { return c.thresholds.rr_min; }));

  keys.push_back(NarrowIntKey<int>("ngram.order",
      [](PipelineConfig& c) -> int& { return c.ngram_order; }));

  keys.push_back(KeyIO{"run.seed",
      [](const PipelineConfig& c) { return std::to_string(c.seed); },
      [](PipelineConfig* c, const std::string& v) {
        const auto parsed = ParseUint(v);
        if (!parsed) return false;
        c->seed = *parsed;
        return true;
      }});
  keys.push_back(NarrowIntKey<int>("run.sweep_seeds",
      [](PipelineConfig& c) -> int& { return c.sweep_seeds; }));
  keys.push_back(NarrowIntKey<int>("run.jobs",
      [](PipelineConfig& c) -> int& { return c.jobs; }));
  return keys;
}

const std::vector<KeyIO>& Keys() {
  static const std::vector<KeyIO> kKeys = BuildKeys();
  return kKeys;
}

}  // namespace

PipelineConfig::PipelineConfig() {
  // Benchmark-scale defaults; the library level keeps its own.
  exemplar.num_rr_nes = 78;
  exemplar.utts_per_rr_ne = 30;
  exemplar.exemplars_per_ur_ne = 10;
  exemplar.ur_boost_max_count = 9;
  sim.beam = 2.5;
}

void ApplyConfigValue(PipelineConfig* config, const std::string& key,
                      const std::string& value) {
  for (const KeyIO& io : Keys()) {
    if (io.key != key) continue;
    if (!io.set(config, value)) {
      throw ConfigError("bad value for " + key + ": " + value);
    }
    return;
  }
  throw ConfigError("unknown config key: " + key);
}

void LoadConfig(std::istream& in, PipelineConfig* config) {
  std::string line;
  std::string section;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = Trim(StripCr(line));
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": malformed section header: " + line);
      }
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected key = value, got: " + line);
    }
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": empty key");
    }
    if (!section.empty() && key.find('.') == std::string::npos) {
      key = section + "." + key;
    }
    try {
      ApplyConfigValue(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_number) + ": " +
                        e.what());
    }
  }
}

void LoadConfigFile(const std::string& path, PipelineConfig* config) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file: " + path);
  LoadConfig(in, config);
}

std::string SerializeConfig(const PipelineConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const KeyIO& io : Keys()) {
    std::string prefix = io.key.substr(0, io.key.find('.'));
    if (prefix != section) {
      if (!section.empty()) out << "\n";
      out << "[" << prefix << "]\n";
      section = prefix;
    }
    out << io.key.substr(prefix.size() + 1) << " = " << io.get(config) << "\n";
  }
  return out.str();
}

void WriteConfigFile(const PipelineConfig& config, const std::string& path,
                     const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  out << SerializeConfig(config);
}

uint64_t ConfigHash(const PipelineConfig& config) {
  return HashString(SerializeConfig(config));
}

std::string ConfigHashHex(const PipelineConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(ConfigHash(config)));
  return buf;
}

std::string ProvenanceHeader(const PipelineConfig& config,
                             const std::string& command,
                             const std::string& plan) {
  std::ostringstream out;
  out << "# urne " << command << "\n";
  out << "# config " << ConfigHashHex(config) << "\n";
  out << "# seed " << config.seed << "\n";
  if (!plan.empty()) out << "# plan " << plan << "\n";
  return out.str();
}

}  // namespace urne
