// Copyright 2026 The MixNN Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the MixNN simulator.
//
//   mixnn run       run one experiment and write a result table
//   mixnn sweep     run one experiment per value of a parameter
//   mixnn report    summarize a result table (mean, sd, CDFs)
//   mixnn gen-data  write a synthetic population file
//   mixnn neighbors neighbor counts of one round's update directions
//   mixnn mix-stream  feed model files through a streaming proxy
//   mixnn attack-trace  score a recorded trace file against references
//   mixnn export-updates  write one traced round's updates as model files

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixnn/analysis/neighbors.h"
#include "mixnn/attack/gradient_similarity.h"
#include "mixnn/data/population.h"
#include "mixnn/errors.h"
#include "mixnn/fl/trace_io.h"
#include "mixnn/harness/config_json.h"
#include "mixnn/harness/experiment.h"
#include "mixnn/harness/report.h"
#include "mixnn/harness/results_io.h"
#include "mixnn/mixer/mixer.h"
#include "mixnn/nn/params_io.h"
#include "mixnn/random.h"

namespace {

using mixnn::harness::ExperimentConfig;

// Flags shared by the subcommands that run experiments. They bind straight
// into an ExperimentConfig; a --config file is applied on top of them.
struct ExperimentFlags {
  ExperimentConfig config;
  std::string config_file;
  std::string channel = "direct";
  std::string optimizer = "sgd";
  std::string ground_truth = "first-layer-origin";
  bool no_passive = false;
  bool no_active = false;

  void Register(CLI::App* app) {
    auto& c = config;
    app->add_option("--config", config_file,
                    "JSON experiment file; its fields override flags")
        ->check(CLI::ExistingFile);
    app->add_option("--id", c.experiment_id, "Experiment id");
    app->add_option("--clients", c.population.num_clients);
    app->add_option("--samples", c.population.samples_per_client,
                    "Train + test samples per client");
    app->add_option("--feature-dim", c.population.feature_dim);
    app->add_option("--classes", c.population.num_main_classes);
    app->add_option("--attribute-classes",
                    c.population.attribute.num_attribute_classes);
    app->add_option("--skew", c.population.attribute.skew);
    app->add_option("--label-skew", c.population.label_skew,
                    "Preference-skewed labels per attribute");
    app->add_option("--hidden", c.hidden_widths, "Hidden layer widths")
        ->delimiter(',');
    app->add_option("--rounds", c.rounds.num_rounds);
    app->add_option("--local-epochs", c.rounds.local_epochs);
    app->add_option("--batch-size", c.rounds.batch_size);
    app->add_option("--optimizer", optimizer)
        ->check(CLI::IsMember({"sgd", "adam"}));
    app->add_option("--lr", c.rounds.optimizer.learning_rate);
    app->add_option("--channel", channel)
        ->check(CLI::IsMember(
            {"direct", "mixer", "mixer-batch", "mixer-streaming", "noisy"}));
    app->add_option("--sigma", c.noise_sigma, "Noise scale (noisy channel)");
    app->add_option("--k", c.mixer_buffer_size,
                    "Buffer size (streaming mixer)");
    app->add_option("--aux-ratio", c.attack.aux_ratio);
    app->add_option("--reference-rounds", c.attack.reference_rounds);
    app->add_option("--attack-rounds", c.attack_rounds);
    app->add_option("--accumulate", c.attack.multi_round_accumulation);
    app->add_option("--rebuild-each-round", c.attack.rebuild_each_round);
    app->add_flag("--no-passive", no_passive);
    app->add_flag("--no-active", no_active);
    app->add_option("--ground-truth", ground_truth)
        ->check(CLI::IsMember({"first-layer-origin", "slot-participant"}));
    app->add_option("--repetitions", c.repetitions);
    app->add_option("--folds", c.folds);
    app->add_option("--seed", c.master_seed, "Master seed");
    app->add_option("--out", c.output_path,
                    "Result CSV (relative to $MIXNN_OUTPUT_DIR if set)");
    app->add_option("--trace", c.trace_path, "Round trace file");
  }

  ExperimentConfig Resolve() const {
    ExperimentConfig c = config;
    c.channel = mixnn::harness::ParseChannel(channel);
    c.rounds.optimizer.kind = mixnn::nn::ParseOptimizerKind(optimizer);
    c.ground_truth = mixnn::attack::ParseGroundTruthRule(ground_truth);
    if (no_passive) c.passive_attack = false;
    if (no_active) c.active_attack = false;
    if (!config_file.empty()) c = mixnn::harness::LoadConfig(config_file, c);
    c.Validate();
    return c;
  }
};

void PrintSummary(const std::vector<mixnn::harness::ResultRow>& rows) {
  const mixnn::harness::Summary s =
      mixnn::harness::Report(rows, {"experiment_id", "channel", "round"});
  mixnn::harness::WriteSummaryCsv(std::cout, s);
}

std::vector<double> ParseValues(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw mixnn::ConfigError("--values: '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MixNN federated-learning privacy simulator"};
  app.require_subcommand(1);

  ExperimentFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  run_flags.Register(run);
  bool run_summary = false;
  run->add_flag("--summary", run_summary, "Print a summary table");

  ExperimentFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter");
  sweep_flags.Register(sweep);
  std::string sweep_param;
  std::string sweep_values;
  bool sweep_summary = false;
  sweep->add_option("--param", sweep_param,
                    "aux_ratio, skew, sigma, k or rounds")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required();
  sweep->add_flag("--summary", sweep_summary, "Print a summary table");

  CLI::App* report = app.add_subcommand("report", "Summarize result tables");
  std::vector<std::string> report_inputs;
  std::vector<std::string> report_group = {"experiment_id", "channel",
                                           "round"};
  std::string report_cdf;
  report->add_option("--in", report_inputs, "Result CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--group", report_group, "Grouping columns")
      ->delimiter(',');
  report->add_option("--cdf", report_cdf, "Also write CDF table here");

  ExperimentFlags gen_flags;
  CLI::App* gen = app.add_subcommand("gen-data", "Write a population file");
  gen_flags.Register(gen);
  std::string gen_out;
  int gen_rep = 0;
  bool gen_background = false;
  double gen_aux_ratio = 0.0;
  gen->add_option("--population-out", gen_out, "Population file")
      ->required();
  gen->add_option("--repetition", gen_rep);
  gen->add_flag("--background", gen_background,
                "Write the adversary's background population instead");
  gen->add_option("--split-aux", gen_aux_ratio,
                  "With --background: keep only the auxiliary split");

  ExperimentFlags nb_flags;
  CLI::App* neighbors =
      app.add_subcommand("neighbors", "Neighbor counts of update directions");
  nb_flags.Register(neighbors);
  int nb_round = 0;
  std::string nb_radii;
  neighbors->add_option("--round", nb_round, "Round to analyze (0-based)");
  neighbors->add_option("--radii", nb_radii, "Comma-separated radii");

  CLI::App* mix = app.add_subcommand(
      "mix-stream", "Feed model files through a streaming proxy");
  int mix_k = 4;
  uint64_t mix_seed = 1;
  std::string mix_out_dir;
  std::vector<std::string> mix_inputs;
  mix->add_option("--k", mix_k)->required();
  mix->add_option("--seed", mix_seed);
  mix->add_option("--out-dir", mix_out_dir)->required();
  mix->add_option("inputs", mix_inputs, "Model files in arrival order")
      ->required()
      ->check(CLI::ExistingFile);

  ExperimentFlags at_flags;
  CLI::App* attack_trace = app.add_subcommand(
      "attack-trace", "Score a trace file's received updates");
  at_flags.Register(attack_trace);
  std::string at_trace, at_aux, at_pop;
  attack_trace->add_option("--trace-in", at_trace)
      ->required()
      ->check(CLI::ExistingFile);
  attack_trace->add_option("--aux-population", at_aux)
      ->required()
      ->check(CLI::ExistingFile);
  attack_trace->add_option("--population", at_pop,
                           "Participants, for ground truth")
      ->check(CLI::ExistingFile);

  CLI::App* export_updates = app.add_subcommand(
      "export-updates", "Write one traced round's updates as model files");
  std::string ex_trace, ex_out_dir;
  int ex_round = 0;
  bool ex_received = false;
  export_updates->add_option("--trace-in", ex_trace)
      ->required()
      ->check(CLI::ExistingFile);
  export_updates->add_option("--round", ex_round, "Round (0-based)");
  export_updates->add_option("--out-dir", ex_out_dir)->required();
  export_updates->add_flag("--received", ex_received,
                           "Post-channel updates instead of what was sent");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto rows = mixnn::harness::RunExperiment(run_flags.Resolve());
      if (run_summary || run_flags.config.output_path.empty()) {
        PrintSummary(rows);
      }
    } else if (sweep->parsed()) {
      const auto rows = mixnn::harness::Sweep(
          sweep_flags.Resolve(), sweep_param, ParseValues(sweep_values));
      if (sweep_summary || sweep_flags.config.output_path.empty()) {
        PrintSummary(rows);
      }
    } else if (report->parsed()) {
      std::vector<mixnn::harness::ResultRow> rows;
      for (const std::string& path : report_inputs) {
        auto part = mixnn::harness::LoadResults(path);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      const auto summary = mixnn::harness::Report(rows, report_group);
      mixnn::harness::WriteSummaryCsv(std::cout, summary);
      if (!report_cdf.empty()) {
        std::ofstream out(report_cdf);
        mixnn::harness::WriteCdfCsv(out, summary);
      }
    } else if (gen->parsed()) {
      ExperimentConfig c = gen_flags.Resolve();
      if (gen_aux_ratio > 0.0) c.attack.aux_ratio = gen_aux_ratio;
      const auto pops =
          mixnn::harness::MakePopulations(c, gen_rep, gen_background);
      if (!gen_background) {
        mixnn::data::SavePopulation(gen_out, pops.population);
      } else {
        mixnn::data::SavePopulation(
            gen_out, gen_aux_ratio > 0.0 ? pops.aux : pops.background);
      }
    } else if (neighbors->parsed()) {
      ExperimentConfig c = nb_flags.Resolve();
      c.passive_attack = c.active_attack = false;
      c.rounds.num_rounds = std::max(c.rounds.num_rounds, nb_round + 1);
      c.output_path.clear();
      mixnn::harness::RepetitionData data;
      mixnn::harness::RunRepetition(c, 0, &data);
      const auto& trace = data.honest_traces.at(nb_round);
      const auto dist = mixnn::analysis::PairwiseDistances(
          trace.per_client_sent, trace.global_before);
      const double covering = mixnn::analysis::CoveringRadius(dist);
      std::vector<double> radii =
          nb_radii.empty() ? std::vector<double>{covering * 0.5, covering,
                                                 covering * 1.5}
                           : ParseValues(nb_radii);
      std::printf("covering_radius,%.17g\n", covering);
      std::printf("radius,participant,neighbors\n");
      for (double r : radii) {
        const auto rep =
            mixnn::analysis::NeighborCountsFromDistances(dist, r);
        for (size_t i = 0; i < rep.counts.size(); ++i) {
          std::printf("%.17g,%zu,%d\n", r, i, rep.counts[i]);
        }
      }
    } else if (mix->parsed()) {
      std::filesystem::create_directories(mix_out_dir);
      std::optional<mixnn::mixer::StreamingMixer> proxy;
      int emitted = 0;
      auto write = [&](const mixnn::nn::ModelSpec& spec,
                       const mixnn::mixer::Emission& e) {
        const auto path = std::filesystem::path(mix_out_dir) /
                          ("emitted_" + std::to_string(emitted++) + ".bin");
        mixnn::nn::SaveModel(path, spec, e.update.params);
        std::cout << path.string() << '\n';
      };
      mixnn::nn::ModelSpec spec;
      for (size_t i = 0; i < mix_inputs.size(); ++i) {
        mixnn::nn::ModelRecord rec = mixnn::nn::LoadModel(mix_inputs[i]);
        if (!proxy) {
          spec = rec.spec;
          proxy.emplace(mix_k, spec, mix_seed);
        } else if (!(rec.spec == spec)) {
          throw mixnn::DimensionError(mix_inputs[i] +
                                      ": model spec differs from the first");
        }
        if (auto e = proxy->Feed({static_cast<int>(i), rec.params})) {
          write(spec, *e);
        }
      }
      for (const auto& e : proxy->Flush()) write(spec, e);
    } else if (export_updates->parsed()) {
      const auto file = mixnn::fl::LoadTraces(ex_trace);
      if (ex_round < 0 || ex_round >= static_cast<int>(file.rounds.size())) {
        throw mixnn::ConfigError("--round: trace has " +
                                 std::to_string(file.rounds.size()) +
                                 " rounds");
      }
      const auto& trace = file.rounds[static_cast<size_t>(ex_round)];
      const auto& updates =
          ex_received ? trace.updates_received : trace.per_client_sent;
      std::filesystem::create_directories(ex_out_dir);
      for (size_t i = 0; i < updates.size(); ++i) {
        const auto path = std::filesystem::path(ex_out_dir) /
                          ("update_" + std::to_string(i) + ".bin");
        mixnn::nn::SaveModel(path, file.spec, updates[i].params);
        std::cout << path.string() << '\n';
      }
    } else if (attack_trace->parsed()) {
      const ExperimentConfig c = at_flags.Resolve();
      const auto file = mixnn::fl::LoadTraces(at_trace);
      const auto aux = mixnn::data::LoadPopulation(at_aux);
      std::optional<mixnn::data::Population> pop;
      if (!at_pop.empty()) pop = mixnn::data::LoadPopulation(at_pop);
      mixnn::fl::RoundConfig training = c.rounds;
      training.seed = mixnn::DeriveSeed(c.master_seed, {0});
      mixnn::attack::ScoreAccumulator acc(c.attack.multi_round_accumulation);
      std::printf("round,slot,prediction,truth,scores\n");
      for (const auto& trace : file.rounds) {
        const auto refs = mixnn::attack::BuildReferences(
            aux, trace.global_before, file.spec, training,
            c.attack.reference_rounds,
            mixnn::DeriveSeed(c.master_seed,
                              {static_cast<uint64_t>(trace.round_index)}));
        auto preds = acc.AddRound(
            trace.round_index,
            mixnn::attack::ScoreUpdates(trace.updates_received,
                                        trace.global_before, refs));
        if (pop) {
          mixnn::attack::AssignGroundTruth(preds, trace, *pop,
                                           c.ground_truth);
        }
        for (const auto& p : preds) {
          std::printf("%d,%d,%d,%d,", p.round_index, p.slot, p.predicted,
                      p.truth);
          for (size_t a = 0; a < p.scores.size(); ++a) {
            std::printf("%s%.17g", a ? ";" : "", p.scores[a]);
          }
          std::printf("\n");
        }
      }
    }
  } catch (const mixnn::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
