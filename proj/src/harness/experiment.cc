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

#include "mixnn/harness/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numeric>
#include <string>

#include "mixnn/defense/noisy_channel.h"
#include "mixnn/errors.h"
#include "mixnn/fl/trace_io.h"
#include "mixnn/harness/results_io.h"
#include "mixnn/mixer/mixer.h"
#include "mixnn/random.h"

namespace mixnn::harness {
namespace {

// Sub-seeds of one repetition.
enum SeedSlot : uint64_t {
  kGeometry = 0,
  kParticipants = 1,
  kBackground = 2,
  kAuxSplit = 3,
  kInit = 4,
  kTraining = 5,
  kChannel = 6,
  kFoldAssignment = 7,
  kPassiveRefs = 8,
  kActiveRefs = 9,
  kActiveChannel = 10,
};

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Fold f evaluates the clients whose position in a seeded permutation is
// congruent to f modulo the fold count.
std::vector<std::vector<size_t>> FoldClients(size_t n, int folds,
                                             uint64_t seed) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<size_t>> out(static_cast<size_t>(folds));
  if (folds == 1) {
    out[0].resize(n);
    std::iota(out[0].begin(), out[0].end(), size_t{0});
    return out;
  }
  for (size_t i = 0; i < n; ++i) out[i % folds].push_back(perm[i]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

std::map<std::string, std::string> ExtraColumns(const ExperimentConfig& c) {
  return {
      {"skew", FormatDouble(c.population.attribute.skew)},
      {"sigma", FormatDouble(c.noise_sigma)},
      {"k", std::to_string(c.mixer_buffer_size)},
      {"ground_truth", attack::GroundTruthRuleName(c.ground_truth)},
  };
}

std::filesystem::path ResolveOutput(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("MIXNN_OUTPUT_DIR"); dir && *dir) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

}  // namespace

std::string ChannelName(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kDirect:
      return "direct";
    case ChannelKind::kMixerBatch:
      return "mixer-batch";
    case ChannelKind::kMixerStreaming:
      return "mixer-streaming";
    case ChannelKind::kNoisy:
      return "noisy";
  }
  return "direct";
}

ChannelKind ParseChannel(const std::string& name) {
  if (name == "direct") return ChannelKind::kDirect;
  if (name == "mixer-batch" || name == "mixer") return ChannelKind::kMixerBatch;
  if (name == "mixer-streaming") return ChannelKind::kMixerStreaming;
  if (name == "noisy") return ChannelKind::kNoisy;
  throw ConfigError("channel: unknown channel '" + name + "'");
}

void ExperimentConfig::Validate() const {
  auto field = [](const std::string& path, const ConfigError& e) {
    return ConfigError(path + ": " + e.what());
  };
  try {
    population.Validate();
  } catch (const ConfigError& e) {
    throw field("population", e);
  }
  try {
    rounds.Validate();
  } catch (const ConfigError& e) {
    throw field("rounds", e);
  }
  try {
    attack.Validate();
  } catch (const ConfigError& e) {
    throw field("attack", e);
  }
  for (int w : hidden_widths) {
    if (w < 1) throw ConfigError("hidden_widths: widths must be >= 1");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("noise_sigma: must be a finite value >= 0");
  }
  if (mixer_buffer_size < 2) {
    throw ConfigError("mixer_buffer_size: must be >= 2");
  }
  if (attack_rounds < 0) throw ConfigError("attack_rounds: must be >= 0");
  if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (experiment_id.empty() ||
      experiment_id.find_first_of(",\n\r\"") != std::string::npos) {
    throw ConfigError(
        "experiment_id: must be non-empty without commas, quotes or newlines");
  }
  if (folds < 1 || folds > population.num_clients) {
    throw ConfigError("folds: must lie in [1, num_clients]");
  }
  if (rounds.participants_per_round > population.num_clients) {
    throw ConfigError(
        "rounds.participants_per_round: exceeds population.num_clients");
  }
  // The auxiliary split must be feasible for the smallest attribute class.
  const int n_attr = population.attribute.num_attribute_classes;
  const int smallest = population.num_clients / n_attr;
  if (std::floor(attack.aux_ratio * smallest + 1e-9) < 1.0 &&
      (passive_attack || active_attack)) {
    throw ConfigError("attack.aux_ratio: leaves an attribute class without "
                      "auxiliary clients");
  }
}

nn::ModelSpec ExperimentConfig::Spec() const {
  return nn::ModelSpec::Dense(population.feature_dim, hidden_widths,
                              population.num_main_classes);
}

std::unique_ptr<fl::UpdateChannel> MakeChannel(const ExperimentConfig& config,
                                               const nn::ModelSpec& spec,
                                               uint64_t seed) {
  switch (config.channel) {
    case ChannelKind::kDirect:
      return std::make_unique<fl::DirectChannel>();
    case ChannelKind::kMixerBatch:
      return std::make_unique<mixer::MixerBatchChannel>(seed);
    case ChannelKind::kMixerStreaming:
      return std::make_unique<mixer::MixerStreamingChannel>(
          config.mixer_buffer_size, spec, seed);
    case ChannelKind::kNoisy:
      return std::make_unique<defense::NoisyChannel>(
          defense::NoiseConfig{config.noise_sigma, seed});
  }
  throw ConfigError("channel: unsupported");
}

RepetitionPopulations MakePopulations(const ExperimentConfig& config, int rep,
                                      bool with_aux) {
  const uint64_t rep_seed = StreamSeed(config.master_seed, Stream::kRepetition,
                                       {static_cast<uint64_t>(rep)});
  auto seed_of = [rep_seed](SeedSlot slot) {
    return DeriveSeed(rep_seed, {static_cast<uint64_t>(slot)});
  };
  RepetitionPopulations out;
  data::PopulationConfig pop_cfg = config.population;
  pop_cfg.geometry_seed = seed_of(kGeometry);
  pop_cfg.seed = seed_of(kParticipants);
  out.population = data::GeneratePopulation(pop_cfg);
  // The adversary's background knowledge: other users drawn from the same
  // distribution as the participants.
  if (with_aux) {
    data::PopulationConfig bg_cfg = pop_cfg;
    bg_cfg.seed = seed_of(kBackground);
    out.background = data::GeneratePopulation(bg_cfg);
    out.aux = data::SplitAuxiliary(out.background, config.attack.aux_ratio,
                                   seed_of(kAuxSplit))
                  .attack_aux;
  }
  return out;
}

std::vector<ResultRow> RunRepetition(const ExperimentConfig& config, int rep,
                                     RepetitionData* data) {
  config.Validate();
  const uint64_t rep_seed = StreamSeed(config.master_seed, Stream::kRepetition,
                                       {static_cast<uint64_t>(rep)});
  auto seed_of = [rep_seed](SeedSlot slot) {
    return DeriveSeed(rep_seed, {static_cast<uint64_t>(slot)});
  };
  const nn::ModelSpec spec = config.Spec();
  const bool attacking = config.passive_attack || config.active_attack;

  RepetitionPopulations pops = MakePopulations(config, rep, attacking);
  const data::Population& pop = pops.population;
  const data::Population& aux = pops.aux;

  fl::RoundConfig training = config.rounds;
  training.seed = seed_of(kTraining);
  const nn::ModelParams init = nn::InitParams(spec, seed_of(kInit));
  const int num_rounds = config.rounds.num_rounds;
  const int attack_rounds = std::min(config.attack_rounds, num_rounds);

  std::vector<nn::ModelParams> globals = {init};
  std::vector<std::optional<double>> passive(num_rounds + 1);
  std::vector<std::optional<double>> active(num_rounds + 1);

  std::unique_ptr<fl::TraceWriter> trace_writer;
  if (!config.trace_path.empty()) {
    std::filesystem::path p = ResolveOutput(config.trace_path);
    if (config.repetitions > 1) {
      p.replace_filename(p.stem().string() + ".rep" + std::to_string(rep) +
                         p.extension().string());
    }
    trace_writer = std::make_unique<fl::TraceWriter>(p, spec);
  }

  std::unique_ptr<fl::UpdateChannel> channel =
      MakeChannel(config, spec, seed_of(kChannel));
  attack::ScoreAccumulator accumulator(config.attack.multi_round_accumulation);
  for (int r = 0; r < num_rounds; ++r) {
    fl::RoundTrace trace =
        fl::RunRound(pop, globals.back(), spec, training, *channel, r);
    if (config.passive_attack && r < attack_rounds) {
      const attack::ReferenceModels refs = attack::BuildReferences(
          aux, trace.global_before, spec, training,
          config.attack.reference_rounds,
          DeriveSeed(seed_of(kPassiveRefs), {static_cast<uint64_t>(r)}));
      std::vector<attack::AttackPrediction> preds = accumulator.AddRound(
          r, attack::ScoreUpdates(trace.updates_received, trace.global_before,
                                  refs));
      attack::AssignGroundTruth(preds, trace, pop, config.ground_truth);
      passive[r + 1] = attack::InferenceAccuracy(preds);
    }
    if (trace_writer) trace_writer->Append(trace);
    globals.push_back(trace.global_after);
    if (data) data->honest_traces.push_back(std::move(trace));
  }
  if (trace_writer) trace_writer->Close();

  if (config.active_attack && attack_rounds > 0) {
    std::unique_ptr<fl::UpdateChannel> active_channel =
        MakeChannel(config, spec, seed_of(kActiveChannel));
    std::vector<attack::ActiveRound> rounds = attack::InferActive(
        pop, aux, spec, init, training, config.attack, *active_channel,
        attack_rounds, config.ground_truth, seed_of(kActiveRefs));
    for (int r = 0; r < attack_rounds; ++r) {
      active[r + 1] = attack::InferenceAccuracy(rounds[r].predictions);
    }
    if (data) data->active_rounds = std::move(rounds);
  }

  const std::vector<std::vector<size_t>> folds =
      FoldClients(pop.size(), config.folds, seed_of(kFoldAssignment));
  const auto extra = ExtraColumns(config);
  std::vector<ResultRow> rows;
  for (int f = 0; f < config.folds; ++f) {
    for (int r = 0; r <= num_rounds; ++r) {
      ResultRow row;
      row.experiment_id = config.experiment_id;
      row.repetition = rep;
      row.fold = f;
      row.round = r;
      row.channel = ChannelName(config.channel);
      row.model_accuracy =
          fl::Evaluate(globals[r], spec, pop, folds[f]).mean;
      row.inference_accuracy_passive = passive[r];
      row.inference_accuracy_active = active[r];
      row.aux_ratio = config.attack.aux_ratio;
      row.extra = extra;
      rows.push_back(std::move(row));
    }
  }
  if (data) {
    data->population = pop;
    data->aux = aux;
  }
  return rows;
}

std::vector<ResultRow> RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  std::vector<ResultRow> rows;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    try {
      std::vector<ResultRow> rep_rows = RunRepetition(config, rep);
      rows.insert(rows.end(), rep_rows.begin(), rep_rows.end());
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      ResultRow row;
      row.experiment_id = config.experiment_id;
      row.repetition = rep;
      row.channel = ChannelName(config.channel);
      row.aux_ratio = config.attack.aux_ratio;
      row.extra = ExtraColumns(config);
      row.error = e.what();
      rows.push_back(std::move(row));
    }
  }
  if (!config.output_path.empty()) {
    SaveResults(ResolveOutput(config.output_path), rows, config);
  }
  return rows;
}

bool IsSweepParameter(const std::string& name) {
  return name == "aux_ratio" || name == "skew" || name == "sigma" ||
         name == "k" || name == "rounds";
}

ExperimentConfig WithParameter(const ExperimentConfig& config,
                               const std::string& name, double value) {
  ExperimentConfig c = config;
  if (name == "aux_ratio") {
    c.attack.aux_ratio = value;
  } else if (name == "skew") {
    c.population.attribute.skew = value;
  } else if (name == "sigma") {
    c.noise_sigma = value;
  } else if (name == "k") {
    if (value != std::floor(value)) throw ConfigError("k: must be an integer");
    c.mixer_buffer_size = static_cast<int>(value);
  } else if (name == "rounds") {
    if (value != std::floor(value)) {
      throw ConfigError("rounds: must be an integer");
    }
    c.rounds.num_rounds = static_cast<int>(value);
  } else {
    throw ConfigError("sweep: unknown parameter '" + name +
                      "' (expected aux_ratio, skew, sigma, k or rounds)");
  }
  c.experiment_id = config.experiment_id + "/" + name + "=" +
                    FormatDouble(value);
  return c;
}

std::vector<ResultRow> Sweep(const ExperimentConfig& config,
                             const std::string& parameter,
                             const std::vector<double>& values) {
  if (!IsSweepParameter(parameter)) {
    throw ConfigError("sweep: unknown parameter '" + parameter +
                      "' (expected aux_ratio, skew, sigma, k or rounds)");
  }
  if (values.empty()) throw ConfigError("sweep: no values given");
  ExperimentConfig base = config;
  base.output_path.clear();
  base.trace_path.clear();
  std::vector<ResultRow> rows;
  for (double v : values) {
    const std::vector<ResultRow> part =
        RunExperiment(WithParameter(base, parameter, v));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (!config.output_path.empty()) {
    SaveResults(ResolveOutput(config.output_path), rows, config);
  }
  return rows;
}

}  // namespace mixnn::harness
