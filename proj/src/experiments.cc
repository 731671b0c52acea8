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

#include "urne/experiments.h"

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "urne/errors.h"
#include "urne/rng.h"
#include "urne/text.h"

namespace urne {

namespace {

std::map<std::string, std::vector<std::string>> HypothesesMap(
    const std::vector<Hypothesis>& hypotheses) {
  std::map<std::string, std::vector<std::string>> by_id;
  for (const Hypothesis& hyp : hypotheses) {
    by_id[hyp.utterance_id] = hyp.tokens;
  }
  return by_id;
}

std::string PlanText(const std::vector<PipelineStage>& plan) {
  if (plan.empty()) return "none";
  std::vector<std::string> names;
  for (PipelineStage stage : plan) names.push_back(StageName(stage));
  return JoinTokens(names, ",");
}

EvalReport EvaluateSystem(const Benchmark& bench,
                          const std::vector<Lattice>& lattices,
                          const std::vector<Hypothesis>& hypotheses,
                          const PipelineConfig& config) {
  EvalReport report = Evaluate(bench.test.utterances, HypothesesMap(hypotheses),
                               bench.inventory, config.thresholds);
  report.has_occurrence = true;
  report.occurrence = UrNeOccurrence(lattices, bench.test.utterances,
                                     bench.inventory, 0, config.thresholds.ur_max);
  return report;
}

}  // namespace

std::vector<Lattice> SimulateAll(const std::vector<Utterance>& references,
                                 const ConfusionModel& confusion,
                                 const NGramModel& lm, const SimConfig& config,
                                 int jobs) {
  std::vector<Lattice> lattices(references.size());
  auto simulate = [&](size_t i) {
    lattices[i] = SimulateLattice(references[i].tokens, confusion, lm, config);
    lattices[i].utterance_id = references[i].id;
  };
  if (jobs <= 1 || references.size() < 2) {
    for (size_t i = 0; i < references.size(); ++i) simulate(i);
    return lattices;
  }
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= references.size()) return;
      try {
        simulate(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  size_t num_workers = std::min<size_t>(jobs, references.size());
  std::vector<std::thread> workers;
  for (size_t w = 0; w < num_workers; ++w) workers.emplace_back(worker);
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
  return lattices;
}

std::set<std::string> UrSurfaces(const std::vector<NamedEntity>& inventory,
                                 const CountThresholds& thresholds) {
  std::set<std::string> surfaces;
  for (const NamedEntity& ne : inventory) {
    if (Classify(ne, thresholds) != CountClass::kRichlyRepresented) {
      surfaces.insert(ne.surface);
    }
  }
  return surfaces;
}

ConfusionModel SeedConfusion(const Benchmark& bench,
                             const PipelineConfig& config, uint64_t seed) {
  return BuildConfusionModel(ConfusionVocabulary(bench),
                             ChildSeed(seed, "confusion"), config.confusion);
}

Corpus AugmentedTrain(const Benchmark& bench, const PipelineConfig& config,
                      int exemplars_per_ur_ne, uint64_t seed) {
  if (exemplars_per_ur_ne == 0) return bench.train;
  ExemplarConfig exemplar = config.exemplar;
  exemplar.exemplars_per_ur_ne = exemplars_per_ur_ne;
  exemplar.rng_seed = ChildSeed(seed, "exemplar");
  NeUtteranceIndex index =
      BuildIndex(bench.train, bench.inventory, config.thresholds);
  ExemplarPool pool =
      BuildPool(bench.train, bench.inventory, index, exemplar);
  return AugmentCorpus(bench.train, bench.inventory, pool, exemplar);
}

std::vector<Lattice> BenchmarkLattices(const Benchmark& bench,
                                       const Corpus& train,
                                       const ConfusionModel& confusion,
                                       const PipelineConfig& config) {
  NGramModel lm = TrainNGram(train, config.ngram_order);
  return SimulateAll(bench.test.utterances, confusion, lm, config.sim,
                     config.jobs);
}

const std::vector<SystemSpec>& SystemGrid() {
  static const std::vector<SystemSpec> kGrid = {
      {"S1", false, false, {}},
      {"S2", true, true, {}},
      {"S3", true, true, {PipelineStage::kNeuralRescore}},
      {"S4", true, true, {PipelineStage::kNeuralEnrichedRescore}},
      {"S5",
       true,
       true,
       {PipelineStage::kNeuralEnrichedRescore, PipelineStage::kLatticeBoost}},
      {"S6", false, false, {PipelineStage::kNeuralRescore}},
      {"S7", false, false, {PipelineStage::kNeuralEnrichedRescore}},
      {"S8",
       false,
       false,
       {PipelineStage::kNeuralEnrichedRescore, PipelineStage::kLatticeBoost}},
      {"S9", true, false, {PipelineStage::kNeuralRescore}},
      {"S10", true, false, {PipelineStage::kNeuralEnrichedRescore}},
      {"S11",
       true,
       false,
       {PipelineStage::kNeuralEnrichedRescore, PipelineStage::kLatticeBoost}},
  };
  return kGrid;
}

SystemArtifacts BuildSystemArtifacts(const Benchmark& bench,
                                     const PipelineConfig& config) {
  SystemArtifacts artifacts;
  artifacts.augmented = AugmentedTrain(
      bench, config, config.exemplar.exemplars_per_ur_ne, config.seed);
  artifacts.lm_base = TrainNGram(bench.train, config.ngram_order);
  artifacts.lm_aug = TrainNGram(artifacts.augmented, config.ngram_order);

  RnnLmHyperparameters hp = config.rnn;
  hp.seed = ChildSeed(config.seed, "rnn-base");
  artifacts.rnn_base = TrainRnnLm(bench.train, hp);
  hp.seed = ChildSeed(config.seed, "rnn-aug");
  artifacts.rnn_aug = TrainRnnLm(artifacts.augmented, hp);

  EnrichmentConfig enrichment = config.enrichment;
  enrichment.rr_ne_donors =
      SelectDonors(bench.inventory, config.num_donors,
                   ChildSeed(config.seed, "donors"), config.thresholds);
  artifacts.rnn_base_enriched =
      EnrichEmbeddings(artifacts.rnn_base, bench.inventory, enrichment);
  artifacts.rnn_aug_enriched =
      EnrichEmbeddings(artifacts.rnn_aug, bench.inventory, enrichment);

  artifacts.confusion = SeedConfusion(bench, config, config.seed);
  artifacts.lattices_base =
      SimulateAll(bench.test.utterances, artifacts.confusion,
                  artifacts.lm_base, config.sim, config.jobs);
  artifacts.lattices_aug =
      SimulateAll(bench.test.utterances, artifacts.confusion,
                  artifacts.lm_aug, config.sim, config.jobs);
  artifacts.keywords = UrSurfaces(bench.inventory, config.thresholds);
  return artifacts;
}

SystemResult RunSystem(const Benchmark& bench,
                       const SystemArtifacts& artifacts,
                       const SystemSpec& spec, const PipelineConfig& config) {
  const std::vector<Lattice>& lattices =
      spec.exemplar_lattices ? artifacts.lattices_aug : artifacts.lattices_base;
  PipelineModels models;
  models.ngram = spec.exemplar_lattices ? &artifacts.lm_aug : &artifacts.lm_base;
  models.rnn = spec.augmented_rnn ? &artifacts.rnn_aug : &artifacts.rnn_base;
  models.rnn_enriched = spec.augmented_rnn ? &artifacts.rnn_aug_enriched
                                           : &artifacts.rnn_base_enriched;
  SystemResult result;
  result.spec = spec;
  result.hypotheses = RunPipeline(lattices, spec.plan, models,
                                  artifacts.keywords, config.rescore);
  result.report = EvaluateSystem(bench, lattices, result.hypotheses, config);
  return result;
}

std::vector<SystemResult> RunSystemGrid(const Benchmark& bench,
                                        const PipelineConfig& config) {
  SystemArtifacts artifacts = BuildSystemArtifacts(bench, config);
  std::vector<SystemResult> results;
  for (const SystemSpec& spec : SystemGrid()) {
    results.push_back(RunSystem(bench, artifacts, spec, config));
  }
  return results;
}

std::string RenderSystemReport(const SystemResult& result) {
  std::ostringstream out;
  out << "# system " << result.spec.name << "\n";
  out << "# lattices " << (result.spec.exemplar_lattices ? "exemplar" : "base")
      << "\n";
  bool neural = false;
  for (PipelineStage stage : result.spec.plan) {
    if (stage == PipelineStage::kNeuralRescore ||
        stage == PipelineStage::kNeuralEnrichedRescore) {
      neural = true;
    }
  }
  out << "# rnnlm "
      << (neural ? (result.spec.augmented_rnn ? "augmented" : "base") : "none")
      << "\n";
  out << "# plan " << PlanText(result.spec.plan) << "\n";
  WriteReportTsv(result.report, out);
  return out.str();
}

Figure ParseFigure(const std::string& name) {
  if (name == "fig1_exemplar_count") return Figure::kFig1ExemplarCount;
  if (name == "fig2_count_threshold") return Figure::kFig2CountThreshold;
  if (name == "fig3_pool_size") return Figure::kFig3PoolSize;
  if (name == "fig4_enrichment_range") return Figure::kFig4EnrichmentRange;
  throw ConfigError("unknown figure: " + name);
}

const std::string& FigureName(Figure figure) {
  static const std::string kNames[] = {
      "fig1_exemplar_count", "fig2_count_threshold", "fig3_pool_size",
      "fig4_enrichment_range"};
  return kNames[static_cast<int>(figure)];
}

namespace {

std::vector<SweepRow> SweepFig1(const Benchmark& bench,
                                const PipelineConfig& config,
                                const std::vector<uint64_t>& seeds) {
  static const int kExemplarCounts[] = {0, 5, 10, 15, 20};
  std::vector<SweepRow> rows;
  for (uint64_t seed : seeds) {
    ConfusionModel confusion = SeedConfusion(bench, config, seed);
    for (int count : kExemplarCounts) {
      Corpus train = AugmentedTrain(bench, config, count, seed);
      std::vector<Lattice> lattices =
          BenchmarkLattices(bench, train, confusion, config);
      OccurrenceResult occurrence =
          UrNeOccurrence(lattices, bench.test.utterances, bench.inventory, 0,
                         config.thresholds.ur_max);
      rows.push_back({static_cast<double>(count), "occurrence",
                      occurrence.Pct(), seed});
    }
  }
  return rows;
}

std::vector<SweepRow> SweepFig2(const Benchmark& bench,
                                const PipelineConfig& config,
                                const std::vector<uint64_t>& seeds) {
  std::vector<SweepRow> rows;
  for (uint64_t seed : seeds) {
    ConfusionModel confusion = SeedConfusion(bench, config, seed);
    std::vector<Lattice> base =
        BenchmarkLattices(bench, AugmentedTrain(bench, config, 0, seed),
                          confusion, config);
    std::vector<Lattice> boosted = BenchmarkLattices(
        bench,
        AugmentedTrain(bench, config, config.exemplar.exemplars_per_ur_ne,
                       seed),
        confusion, config);
    for (int64_t b = 0; b <= config.thresholds.ur_max; ++b) {
      rows.push_back(
          {static_cast<double>(b), "occurrence_base",
           UrNeOccurrence(base, bench.test.utterances, bench.inventory, 0, b)
               .Pct(),
           seed});
      rows.push_back(
          {static_cast<double>(b), "occurrence_exemplar",
           UrNeOccurrence(boosted, bench.test.utterances, bench.inventory, 0,
                          b)
               .Pct(),
           seed});
    }
  }
  return rows;
}

std::vector<SweepRow> SweepFig3(const Benchmark& bench,
                                const PipelineConfig& config,
                                const std::vector<uint64_t>& seeds) {
  static const int kPoolSizes[] = {10, 20, 30, 40, 50, 60, 70, 78};
  static const int kUttsPerNe[] = {10, 20, 30};
  std::vector<SweepRow> rows;
  for (uint64_t seed : seeds) {
    ConfusionModel confusion = SeedConfusion(bench, config, seed);
    for (int pool_size : kPoolSizes) {
      for (int utts : kUttsPerNe) {
        PipelineConfig variant = config;
        variant.exemplar.num_rr_nes = pool_size;
        variant.exemplar.utts_per_rr_ne = utts;
        Corpus train = AugmentedTrain(
            bench, variant, variant.exemplar.exemplars_per_ur_ne, seed);
        std::vector<Lattice> lattices =
            BenchmarkLattices(bench, train, confusion, variant);
        OccurrenceResult occurrence =
            UrNeOccurrence(lattices, bench.test.utterances, bench.inventory,
                           0, config.thresholds.ur_max);
        rows.push_back({static_cast<double>(pool_size),
                        "occurrence_utts" + std::to_string(utts),
                        occurrence.Pct(), seed});
      }
    }
  }
  return rows;
}

std::vector<SweepRow> SweepFig4(const Benchmark& bench,
                                const PipelineConfig& config,
                                const std::vector<uint64_t>& seeds) {
  std::vector<SweepRow> rows;
  for (uint64_t seed : seeds) {
    ConfusionModel confusion = SeedConfusion(bench, config, seed);
    Corpus train = AugmentedTrain(bench, config,
                                  config.exemplar.exemplars_per_ur_ne, seed);
    NGramModel lm = TrainNGram(train, config.ngram_order);
    std::vector<Lattice> lattices = SimulateAll(
        bench.test.utterances, confusion, lm, config.sim, config.jobs);
    RnnLmHyperparameters hp = config.rnn;
    hp.seed = ChildSeed(seed, "rnn-aug");
    RnnLmModel rnn = TrainRnnLm(train, hp);
    std::vector<std::string> donors =
        SelectDonors(bench.inventory, config.num_donors,
                     ChildSeed(seed, "donors"), config.thresholds);
    std::set<std::string> keywords =
        UrSurfaces(bench.inventory, config.thresholds);
    for (int64_t cap = 0; cap <= config.thresholds.ur_max; ++cap) {
      EnrichmentConfig enrichment = config.enrichment;
      enrichment.rr_ne_donors = donors;
      enrichment.ur_target_max_count = cap;
      RnnLmModel enriched = EnrichEmbeddings(rnn, bench.inventory, enrichment);
      PipelineModels models;
      models.rnn_enriched = &enriched;
      std::vector<Hypothesis> hypotheses =
          RunPipeline(lattices, {PipelineStage::kNeuralEnrichedRescore},
                      models, keywords, config.rescore);
      EvalReport report =
          Evaluate(bench.test.utterances, HypothesesMap(hypotheses),
                   bench.inventory, config.thresholds);
      rows.push_back({static_cast<double>(cap), "ne_wer_all",
                      report.ne_wer.AllPct(), seed});
      rows.push_back({static_cast<double>(cap), "wer", report.WerPct(), seed});
    }
  }
  return rows;
}

}  // namespace

std::vector<SweepRow> RunSweep(Figure figure, const Benchmark& bench,
                               const PipelineConfig& config,
                               const std::vector<uint64_t>& seeds) {
  switch (figure) {
    case Figure::kFig1ExemplarCount: return SweepFig1(bench, config, seeds);
    case Figure::kFig2CountThreshold: return SweepFig2(bench, config, seeds);
    case Figure::kFig3PoolSize: return SweepFig3(bench, config, seeds);
    case Figure::kFig4EnrichmentRange: return SweepFig4(bench, config, seeds);
  }
  throw ConfigError("unknown figure");
}

std::vector<uint64_t> SweepSeeds(const PipelineConfig& config) {
  std::vector<uint64_t> seeds;
  for (int i = 0; i < config.sweep_seeds; ++i) {
    seeds.push_back(ChildSeed(config.seed, "sweep-" + std::to_string(i)));
  }
  return seeds;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "x,metric,value,seed\n";
  for (const SweepRow& row : rows) {
    out << FormatFixed(row.x, 0) << "," << row.metric << ","
        << FormatFixed(row.value, 4) << "," << row.seed << "\n";
  }
}

void WriteSweepCsvFile(const std::vector<SweepRow>& rows,
                       const std::string& path, const std::string& header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write sweep csv: " + path);
  if (!header.empty()) WriteHeaderBlock(out, header);
  WriteSweepCsv(rows, out);
}

}  // namespace urne
