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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "urne/benchmark.h"
#include "urne/config.h"
#include "urne/corpus.h"
#include "urne/errors.h"
#include "urne/exemplar.h"
#include "urne/experiments.h"
#include "urne/lattice.h"
#include "urne/metrics.h"
#include "urne/ngram.h"
#include "urne/rescore.h"
#include "urne/rng.h"
#include "urne/rnnlm.h"
#include "urne/simdecode.h"
#include "urne/text.h"

namespace urne {
namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  uint64_t seed = 0;
  std::string out_dir;
  int jobs = 1;
};

struct PathArgs {
  std::string train;
  std::string test;
  std::string inventory;
};

void AddCommonFlags(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "Config file");
  cmd->add_option("--set", args->overrides,
                  "Config override, section.key=value (repeatable)");
  cmd->add_option("--seed", args->seed, "Global seed (run.seed)");
  cmd->add_option("--out", args->out_dir, "Output directory (paths.out_dir)");
  cmd->add_option("--jobs", args->jobs, "Worker threads (run.jobs)");
}

std::string TrimCopy(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

// Config file first, then --set pairs, then the dedicated flags.
PipelineConfig ResolveConfig(const CLI::App& cmd, const CommonArgs& args) {
  PipelineConfig config;
  if (!args.config_path.empty()) LoadConfigFile(args.config_path, &config);
  for (const std::string& pair : args.overrides) {
    const size_t eq = pair.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override must be key=value: " + pair);
    }
    ApplyConfigValue(&config, TrimCopy(pair.substr(0, eq)),
                     TrimCopy(pair.substr(eq + 1)));
  }
  if (cmd.count("--seed") > 0) config.seed = args.seed;
  if (cmd.count("--out") > 0) config.out_dir = args.out_dir;
  if (cmd.count("--jobs") > 0) config.jobs = args.jobs;
  return config;
}

std::string ResolvePath(const std::string& flag, const std::string& from_config,
                        const std::string& what) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  throw ConfigError("missing " + what + " path");
}

std::string OutPath(const PipelineConfig& config, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output dir " + config.out_dir + ": " +
                      ec.message());
  }
  return (std::filesystem::path(config.out_dir) / name).string();
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("cannot write " + path);
}

std::string PlanString(const std::vector<PipelineStage>& plan) {
  if (plan.empty()) return "none";
  std::vector<std::string> names;
  names.reserve(plan.size());
  for (PipelineStage stage : plan) names.push_back(StageName(stage));
  return JoinTokens(names, ",");
}

Corpus LoadTrain(const PipelineConfig& config, const PathArgs& paths) {
  return LoadCorpusFile(ResolvePath(paths.train, config.train_path,
                                    "train corpus (--train or paths.train)"));
}

Corpus LoadTest(const PipelineConfig& config, const PathArgs& paths) {
  return LoadCorpusFile(ResolvePath(paths.test, config.test_path,
                                    "test corpus (--test or paths.test)"));
}

std::vector<NamedEntity> LoadInventory(const PipelineConfig& config,
                                       const PathArgs& paths,
                                       const Corpus& train) {
  return LoadNeInventoryFile(
      ResolvePath(paths.inventory, config.inventory_path,
                  "NE inventory (--inventory or paths.inventory)"),
      train);
}

Benchmark LoadBench(const PipelineConfig& config, const PathArgs& paths) {
  Benchmark bench;
  bench.train = LoadTrain(config, paths);
  bench.test = LoadTest(config, paths);
  bench.inventory = LoadInventory(config, paths, bench.train);
  return bench;
}

void Note(const std::string& path) { std::cout << "wrote " << path << "\n"; }

void CmdStats(const PipelineConfig& config, const PathArgs& paths) {
  const Corpus train = LoadTrain(config, paths);
  std::vector<NamedEntity> inventory;
  const std::string inv_path =
      !paths.inventory.empty() ? paths.inventory : config.inventory_path;
  if (!inv_path.empty()) inventory = LoadNeInventoryFile(inv_path, train);

  std::ostringstream body;
  body << "corpus\tutterances\ttokens\tne_tokens\tne_rate_pct\toov_tokens"
       << "\toov_rate_pct\n";
  const auto row = [&](const std::string& name, const Corpus& corpus) {
    const CorpusStats stats =
        ComputeCorpusStats(corpus, inventory, train.vocabulary);
    body << name << '\t' << stats.utterances << '\t' << stats.tokens << '\t'
         << stats.ne_tokens << '\t' << FormatFixed(stats.NeRatePct(), 2)
         << '\t' << stats.oov_tokens << '\t'
         << FormatFixed(stats.OovRatePct(), 2) << '\n';
  };
  row("train", train);
  const std::string test_path =
      !paths.test.empty() ? paths.test : config.test_path;
  if (!test_path.empty()) row("test", LoadCorpusFile(test_path));

  const std::string path = OutPath(config, "stats.tsv");
  WriteTextFile(path, ProvenanceHeader(config, "stats") + body.str());
  std::cout << body.str();
  Note(path);
}

void CmdTrainNgram(const PipelineConfig& config, const PathArgs& paths) {
  const Corpus train = LoadTrain(config, paths);
  const NGramModel model = TrainNGram(train, config.ngram_order);
  const std::string path = OutPath(config, "lm.arpa");
  WriteArpaFile(model, path, ProvenanceHeader(config, "train-ngram"));
  Note(path);
}

void CmdExemplar(const PipelineConfig& config, const PathArgs& paths) {
  const Corpus train = LoadTrain(config, paths);
  const std::vector<NamedEntity> inventory =
      LoadInventory(config, paths, train);
  ExemplarConfig exemplar = config.exemplar;
  exemplar.rng_seed = ChildSeed(config.seed, "exemplar");
  const NeUtteranceIndex index =
      BuildIndex(train, inventory, config.thresholds);
  const ExemplarPool pool = BuildPool(train, inventory, index, exemplar);
  std::vector<Exemplar> records;
  const Corpus augmented =
      AugmentCorpus(train, inventory, pool, exemplar, &records);
  const std::string header = ProvenanceHeader(config, "exemplar");
  const std::string corpus_path = OutPath(config, "train_augmented.txt");
  WriteCorpusFile(augmented, corpus_path, header);
  const std::string sidecar_path = OutPath(config, "exemplars.tsv");
  WriteExemplarProvenanceFile(records, sidecar_path, header);
  Note(corpus_path);
  Note(sidecar_path);
}

void CmdSimulate(const PipelineConfig& config, const PathArgs& paths,
                 const std::string& lm_path) {
  Benchmark bench = LoadBench(config, paths);
  const NGramModel lm = lm_path.empty()
                            ? TrainNGram(bench.train, config.ngram_order)
                            : ReadArpaFile(lm_path);
  const ConfusionModel confusion = SeedConfusion(bench, config, config.seed);
  const std::vector<Lattice> lattices = SimulateAll(
      bench.test.utterances, confusion, lm, config.sim, config.jobs);
  const std::string header = ProvenanceHeader(config, "simulate");
  const std::string lattice_path = OutPath(config, "lattices.txt");
  WriteLatticeFile(lattices, lattice_path, header);
  const std::string confusion_path = OutPath(config, "confusion.tsv");
  WriteConfusionTsvFile(confusion, confusion_path, header);
  Note(lattice_path);
  Note(confusion_path);
}

void CmdTrainRnnlm(const PipelineConfig& config, const PathArgs& paths) {
  const Corpus train = LoadTrain(config, paths);
  RnnLmHyperparameters hparams = config.rnn;
  hparams.seed = ChildSeed(config.seed, "rnn");
  const RnnLmModel model = TrainRnnLm(train, hparams);
  const std::string path = OutPath(config, "rnnlm.ckpt");
  WriteRnnLmFile(model, path, ProvenanceHeader(config, "train-rnnlm"));
  Note(path);
}

void CmdEnrich(const PipelineConfig& config, const PathArgs& paths,
               const std::string& model_path) {
  const Corpus train = LoadTrain(config, paths);
  const std::vector<NamedEntity> inventory =
      LoadInventory(config, paths, train);
  const RnnLmModel model = ReadRnnLmFile(model_path);
  EnrichmentConfig enrichment = config.enrichment;
  enrichment.rr_ne_donors =
      SelectDonors(inventory, config.num_donors,
                   ChildSeed(config.seed, "donors"), config.thresholds);
  const RnnLmModel enriched = EnrichEmbeddings(model, inventory, enrichment);
  const std::string path = OutPath(config, "rnnlm_enriched.ckpt");
  WriteRnnLmFile(enriched, path, ProvenanceHeader(config, "enrich"));
  Note(path);
}

void CmdRescore(const PipelineConfig& config, const PathArgs& paths,
                const std::string& lattices_path, const std::string& plan_text,
                const std::string& ngram_path, const std::string& model_path,
                const std::string& enriched_path) {
  const std::vector<Lattice> lattices = ReadLatticeFile(lattices_path);
  const std::vector<PipelineStage> plan = ParseStagePlan(plan_text);

  NGramModel ngram;
  RnnLmModel rnn;
  RnnLmModel rnn_enriched;
  PipelineModels models;
  if (!ngram_path.empty()) {
    ngram = ReadArpaFile(ngram_path);
    models.ngram = &ngram;
  }
  if (!model_path.empty()) {
    rnn = ReadRnnLmFile(model_path);
    models.rnn = &rnn;
  }
  if (!enriched_path.empty()) {
    rnn_enriched = ReadRnnLmFile(enriched_path);
    models.rnn_enriched = &rnn_enriched;
  }

  std::set<std::string> keywords;
  if (std::find(plan.begin(), plan.end(), PipelineStage::kLatticeBoost) !=
      plan.end()) {
    const Corpus train = LoadTrain(config, paths);
    keywords =
        UrSurfaces(LoadInventory(config, paths, train), config.thresholds);
  }

  const std::vector<Hypothesis> hypotheses =
      RunPipeline(lattices, plan, models, keywords, config.rescore);
  const std::string path = OutPath(config, "hyps.txt");
  WriteHypothesesFile(hypotheses, path,
                      ProvenanceHeader(config, "rescore", PlanString(plan)));
  Note(path);
}

void CmdBoost(const PipelineConfig& config, const PathArgs& paths,
              const std::string& lattices_path, const std::string& hyps_path) {
  const std::vector<Lattice> lattices = ReadLatticeFile(lattices_path);
  const Corpus train = LoadTrain(config, paths);
  const std::set<std::string> keywords =
      UrSurfaces(LoadInventory(config, paths, train), config.thresholds);
  const std::string stage = StageName(PipelineStage::kLatticeBoost);

  std::vector<Hypothesis> hypotheses;
  if (hyps_path.empty()) {
    hypotheses = RunPipeline(lattices, {PipelineStage::kLatticeBoost}, {},
                             keywords, config.rescore);
  } else {
    const std::vector<Hypothesis> loaded = ReadHypothesesFile(hyps_path);
    std::map<std::string, size_t> by_id;
    for (size_t i = 0; i < loaded.size(); ++i) {
      by_id.emplace(loaded[i].utterance_id, i);
    }
    hypotheses.reserve(lattices.size());
    for (const Lattice& lattice : lattices) {
      const auto it = by_id.find(lattice.utterance_id);
      if (it == by_id.end()) {
        throw ConfigError("no hypothesis for utterance " +
                          lattice.utterance_id);
      }
      Hypothesis hyp = loaded[it->second];
      LatticeBoost(lattice, keywords, config.rescore.scales, &hyp);
      hyp.stages.push_back(stage);
      hypotheses.push_back(std::move(hyp));
    }
  }
  const std::string path = OutPath(config, "hyps_boosted.txt");
  WriteHypothesesFile(hypotheses, path,
                      ProvenanceHeader(config, "boost", stage));
  Note(path);
}

void CmdScore(const PipelineConfig& config, const PathArgs& paths,
              const std::string& ref_path, const std::string& hyp_path,
              const std::string& lattices_path) {
  const Corpus refs = LoadCorpusFile(ResolvePath(
      ref_path, config.test_path, "reference corpus (--ref or paths.test)"));
  const std::vector<Hypothesis> hypotheses = ReadHypothesesFile(hyp_path);
  std::map<std::string, std::vector<std::string>> by_id;
  for (const Hypothesis& hyp : hypotheses) by_id[hyp.utterance_id] = hyp.tokens;

  std::vector<NamedEntity> inventory;
  const std::string inv_path =
      !paths.inventory.empty() ? paths.inventory : config.inventory_path;
  if (!inv_path.empty()) {
    const Corpus train = LoadTrain(config, paths);
    inventory = LoadNeInventoryFile(inv_path, train);
  }

  EvalReport report =
      Evaluate(refs.utterances, by_id, inventory, config.thresholds);
  if (!lattices_path.empty()) {
    report.occurrence =
        UrNeOccurrence(ReadLatticeFile(lattices_path), refs.utterances,
                       inventory, 0, config.thresholds.ur_max);
    report.has_occurrence = true;
  }

  const std::string header = ProvenanceHeader(config, "score");
  std::ostringstream tsv;
  WriteReportTsv(report, tsv);
  const std::string tsv_path = OutPath(config, "report.tsv");
  WriteTextFile(tsv_path, header + tsv.str());
  std::ostringstream text;
  WriteReportText(report, text);
  const std::string text_path = OutPath(config, "report.txt");
  WriteTextFile(text_path, header + text.str());
  std::cout << text.str();
  Note(tsv_path);
  Note(text_path);
}

void CmdSweep(const PipelineConfig& config, const PathArgs& paths,
              const std::string& figure_name) {
  const Figure figure = ParseFigure(figure_name);
  const Benchmark bench = LoadBench(config, paths);
  const std::vector<SweepRow> rows =
      RunSweep(figure, bench, config, SweepSeeds(config));
  const std::string path = OutPath(config, FigureName(figure) + ".csv");
  WriteSweepCsvFile(rows, path, ProvenanceHeader(config, "sweep"));
  Note(path);
}

void CmdMakeBenchmark(const PipelineConfig& config) {
  BenchmarkConfig bc = config.benchmark;
  bc.seed = config.seed;
  const Benchmark bench = MakeBenchmark(bc);
  OutPath(config, "train.txt");  // ensures the directory exists
  WriteBenchmarkFiles(bench, config.out_dir,
                      ProvenanceHeader(config, "make-benchmark"));
  Note(OutPath(config, "train.txt"));
  Note(OutPath(config, "test.txt"));
  Note(OutPath(config, "inventory.tsv"));
}

void CmdSystems(const PipelineConfig& config, const PathArgs& paths) {
  const Benchmark bench = LoadBench(config, paths);
  const std::vector<SystemResult> results = RunSystemGrid(bench, config);

  std::ostringstream summary;
  summary << "system\tlattices\trnnlm\tplan\twer\tne_wer_rare\tne_wer_absent"
          << "\tne_wer_all\tur_ne_occurrence\n";
  for (const SystemResult& result : results) {
    const SystemSpec& spec = result.spec;
    const std::string plan = PlanString(spec.plan);
    const std::string report_path =
        OutPath(config, "report_" + spec.name + ".tsv");
    WriteTextFile(report_path, ProvenanceHeader(config, "systems", plan) +
                                   RenderSystemReport(result));
    const std::string hyps_path =
        OutPath(config, "hyps_" + spec.name + ".txt");
    WriteHypothesesFile(result.hypotheses, hyps_path,
                        ProvenanceHeader(config, "systems", plan));

    const bool neural =
        std::any_of(spec.plan.begin(), spec.plan.end(), [](PipelineStage s) {
          return s == PipelineStage::kNeuralRescore ||
                 s == PipelineStage::kNeuralEnrichedRescore;
        });
    summary << spec.name << '\t'
            << (spec.exemplar_lattices ? "exemplar" : "base") << '\t'
            << (neural ? (spec.augmented_rnn ? "augmented" : "base") : "none")
            << '\t' << plan << '\t' << FormatFixed(result.report.WerPct(), 2)
            << '\t' << FormatFixed(result.report.ne_wer.RarePct(), 2) << '\t'
            << FormatFixed(result.report.ne_wer.AbsentPct(), 2) << '\t'
            << FormatFixed(result.report.ne_wer.AllPct(), 2) << '\t'
            << FormatFixed(result.report.occurrence.Pct(), 2) << '\n';
  }
  const std::string path = OutPath(config, "systems.tsv");
  WriteTextFile(path, ProvenanceHeader(config, "systems") + summary.str());
  std::cout << summary.str();
  Note(path);
}

int Run(int argc, char** argv) {
  CLI::App app{"Named-entity lattice rescoring pipeline"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd = nullptr;
    CommonArgs common;
    PathArgs paths;
  };
  std::map<std::string, Sub> subs;
  const auto add = [&](const std::string& name, const std::string& help,
                       bool train, bool test, bool inventory) -> Sub& {
    Sub& sub = subs[name];
    sub.cmd = app.add_subcommand(name, help);
    AddCommonFlags(sub.cmd, &sub.common);
    if (train) {
      sub.cmd->add_option("--train", sub.paths.train, "Train corpus");
    }
    if (test) sub.cmd->add_option("--test", sub.paths.test, "Test corpus");
    if (inventory) {
      sub.cmd->add_option("--inventory", sub.paths.inventory, "NE inventory");
    }
    return sub;
  };

  add("stats", "Corpus summary table", true, true, true);
  add("train-ngram", "Witten-Bell n-gram LM to ARPA", true, false, false);
  add("exemplar", "Exemplar-augmented training text", true, false, true);

  Sub& simulate = add("simulate", "Simulated decoding lattices", true, true,
                      true);
  std::string simulate_lm;
  simulate.cmd->add_option("--lm", simulate_lm,
                           "ARPA LM (default: train in process)");

  add("train-rnnlm", "RNN LM checkpoint", true, false, false);

  Sub& enrich = add("enrich", "Embedding-enriched RNN LM", true, false, true);
  std::string enrich_model;
  enrich.cmd->add_option("--model", enrich_model, "RNN LM checkpoint")
      ->required();

  Sub& rescore = add("rescore", "Stage-plan rescoring", true, false, true);
  std::string rescore_lattices;
  std::string rescore_plan = "neural_rescore";
  std::string rescore_ngram;
  std::string rescore_model;
  std::string rescore_enriched;
  rescore.cmd->add_option("--lattices", rescore_lattices, "Lattice file")
      ->required();
  rescore.cmd
      ->add_option("--plan", rescore_plan, "Comma-separated stage names")
      ->capture_default_str();
  rescore.cmd->add_option("--ngram", rescore_ngram, "ARPA LM for ngram_swap");
  rescore.cmd->add_option("--model", rescore_model, "RNN LM checkpoint");
  rescore.cmd->add_option("--enriched-model", rescore_enriched,
                          "Enriched RNN LM checkpoint");

  Sub& boost = add("boost", "Keyword-biased lattice boost", true, false, true);
  std::string boost_lattices;
  std::string boost_hyps;
  boost.cmd->add_option("--lattices", boost_lattices, "Lattice file")
      ->required();
  boost.cmd->add_option("--hyps", boost_hyps,
                        "Hypotheses to boost (default: lattice best paths)");

  Sub& score = add("score", "WER and NE-WER report", true, false, true);
  std::string score_ref;
  std::string score_hyp;
  std::string score_lattices;
  score.cmd->add_option("--ref", score_ref, "Reference corpus");
  score.cmd->add_option("--hyp", score_hyp, "Hypotheses file")->required();
  score.cmd->add_option("--lattices", score_lattices,
                        "Lattice file for the occurrence metric");

  Sub& sweep = add("sweep", "Figure sweep to CSV", true, true, true);
  std::string sweep_figure;
  sweep.cmd
      ->add_option("--figure", sweep_figure,
                   "fig1_exemplar_count | fig2_count_threshold | "
                   "fig3_pool_size | fig4_enrichment_range")
      ->required();

  add("make-benchmark", "Synthetic planted-NE benchmark files", false, false,
      false);
  add("systems", "S1-S11 system grid reports", true, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.cmd->parsed()) continue;
    PipelineConfig config = ResolveConfig(*sub.cmd, sub.common);
    if (name == "stats") {
      CmdStats(config, sub.paths);
    } else if (name == "train-ngram") {
      CmdTrainNgram(config, sub.paths);
    } else if (name == "exemplar") {
      CmdExemplar(config, sub.paths);
    } else if (name == "simulate") {
      CmdSimulate(config, sub.paths, simulate_lm);
    } else if (name == "train-rnnlm") {
      CmdTrainRnnlm(config, sub.paths);
    } else if (name == "enrich") {
      CmdEnrich(config, sub.paths, enrich_model);
    } else if (name == "rescore") {
      CmdRescore(config, sub.paths, rescore_lattices, rescore_plan,
                 rescore_ngram, rescore_model, rescore_enriched);
    } else if (name == "boost") {
      CmdBoost(config, sub.paths, boost_lattices, boost_hyps);
    } else if (name == "score") {
      CmdScore(config, sub.paths, score_ref, score_hyp, score_lattices);
    } else if (name == "sweep") {
      CmdSweep(config, sub.paths, sweep_figure);
    } else if (name == "make-benchmark") {
      CmdMakeBenchmark(config);
    } else if (name == "systems") {
      CmdSystems(config, sub.paths);
    }
  }
  return 0;
}

}  // namespace
}  // namespace urne

int main(int argc, char** argv) {
  try {
    return urne::Run(argc, argv);
  } catch (const urne::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (...) {
    std::cerr << "internal error\n";
    return 2;
  }
}
