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

#ifndef URNE_EXPERIMENTS_H_
#define URNE_EXPERIMENTS_H_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "urne/benchmark.h"
#include "urne/config.h"
#include "urne/metrics.h"
#include "urne/ngram.h"
#include "urne/rescore.h"
#include "urne/rnnlm.h"
#include "urne/simdecode.h"

namespace urne {

// Experiment harness: the system grid S1-S11 and the four figure sweeps,
// all on the synthetic benchmark. Everything is a pure function of
// (benchmark, config, seed).

// Simulates one lattice per reference and stamps the utterance ids. Worker
// pool of `jobs` threads; output order matches the references regardless of
// scheduling.
std::vector<Lattice> SimulateAll(const std::vector<Utterance>& references,
                                 const ConfusionModel& confusion,
                                 const NGramModel& lm, const SimConfig& config,
                                 int jobs = 1);

// Surfaces classified Absent or Rare: the boost keyword list.
std::set<std::string> UrSurfaces(const std::vector<NamedEntity>& inventory,
                                 const CountThresholds& thresholds = {});

// Per-seed confusion model over the benchmark vocabulary.
ConfusionModel SeedConfusion(const Benchmark& bench,
                             const PipelineConfig& config, uint64_t seed);

// Training text with exemplars_per_ur_ne exemplars for every entity whose
// count is at most exemplar.ur_boost_max_count. Zero exemplars returns the
// original utterance list unchanged.
Corpus AugmentedTrain(const Benchmark& bench, const PipelineConfig& config,
                      int exemplars_per_ur_ne, uint64_t seed);

// N-gram LM on `train`, then one simulated lattice per test reference.
std::vector<Lattice> BenchmarkLattices(const Benchmark& bench,
                                       const Corpus& train,
                                       const ConfusionModel& confusion,
                                       const PipelineConfig& config);

// One named variant of the system grid.
struct SystemSpec {
  std::string name;
  bool exemplar_lattices = false;  // decode with the augmented n-gram LM
  bool augmented_rnn = false;      // rescore with the augmented-text RNNLM
  std::vector<PipelineStage> plan;
};

// S1 baseline; S2-S5 exemplar lattices with the coupled RNNLM; S6-S8 plain
// lattices; S9-S11 exemplar lattices with the decoupled (plain-text) RNNLM.
const std::vector<SystemSpec>& SystemGrid();

// Models and lattice sets shared across the grid.
struct SystemArtifacts {
  Corpus augmented;
  NGramModel lm_base;
  NGramModel lm_aug;
  RnnLmModel rnn_base;
  RnnLmModel rnn_base_enriched;
  RnnLmModel rnn_aug;
  RnnLmModel rnn_aug_enriched;
  ConfusionModel confusion;
  std::vector<Lattice> lattices_base;
  std::vector<Lattice> lattices_aug;
  std::set<std::string> keywords;
};

SystemArtifacts BuildSystemArtifacts(const Benchmark& bench,
                                     const PipelineConfig& config);

struct SystemResult {
  SystemSpec spec;
  std::vector<Hypothesis> hypotheses;
  EvalReport report;
};

SystemResult RunSystem(const Benchmark& bench,
                       const SystemArtifacts& artifacts,
                       const SystemSpec& spec, const PipelineConfig& config);

std::vector<SystemResult> RunSystemGrid(const Benchmark& bench,
                                        const PipelineConfig& config);

// Deterministic report body: provenance comment lines for the system
// followed by the metric TSV. Identical stages and inputs render to
// identical bytes.
std::string RenderSystemReport(const SystemResult& result);

enum class Figure {
  kFig1ExemplarCount,
  kFig2CountThreshold,
  kFig3PoolSize,
  kFig4EnrichmentRange,
};

// fig1_exemplar_count, fig2_count_threshold, fig3_pool_size,
// fig4_enrichment_range. Throws ConfigError on anything else.
Figure ParseFigure(const std::string& name);
const std::string& FigureName(Figure figure);

struct SweepRow {
  double x = 0.0;
  std::string metric;
  double value = 0.0;
  uint64_t seed = 0;
};

// fig1: occurrence of [0, ur_max] entities versus exemplars per entity.
// fig2: occurrence over [0, b] for b in 0..ur_max, with and without
//       exemplars.
// fig3: occurrence versus exemplar pool size, one metric per
//       utts_per_rr_ne in {10, 20, 30}.
// fig4: ne_wer_all and wer versus the enrichment count cap.
std::vector<SweepRow> RunSweep(Figure figure, const Benchmark& bench,
                               const PipelineConfig& config,
                               const std::vector<uint64_t>& seeds);

// sweep_seeds child seeds of config.seed.
std::vector<uint64_t> SweepSeeds(const PipelineConfig& config);

// "x,metric,value,seed" header plus one row per entry.
void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);
void WriteSweepCsvFile(const std::vector<SweepRow>& rows,
                       const std::string& path,
                       const std::string& header = "");

}  // namespace urne

#endif  // URNE_EXPERIMENTS_H_
