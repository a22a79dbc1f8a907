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

#ifndef MIXNN_HARNESS_EXPERIMENT_H_
#define MIXNN_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixnn/attack/gradient_similarity.h"
#include "mixnn/data/population.h"
#include "mixnn/fl/federated.h"
#include "mixnn/nn/model.h"

namespace mixnn::harness {

enum class ChannelKind { kDirect, kMixerBatch, kMixerStreaming, kNoisy };

std::string ChannelName(ChannelKind kind);
ChannelKind ParseChannel(const std::string& name);

struct ExperimentConfig {
  std::string experiment_id = "default";
  // `seed` and `geometry_seed` are derived per repetition from master_seed.
  data::PopulationConfig population;
  std::vector<int> hidden_widths = {64, 32};
  // `seed` is derived per repetition from master_seed.
  fl::RoundConfig rounds;
  ChannelKind channel = ChannelKind::kDirect;
  double noise_sigma = 1.0;
  int mixer_buffer_size = 4;
  attack::AttackConfig attack;
  bool passive_attack = true;
  bool active_attack = true;
  // Attacks are evaluated on the first `attack_rounds` rounds.
  int attack_rounds = 5;
  attack::GroundTruthRule ground_truth =
      attack::GroundTruthRule::kFirstLayerOrigin;
  int repetitions = 1;
  int folds = 1;
  uint64_t master_seed = 42;
  // Optional outputs; relative paths resolve against $MIXNN_OUTPUT_DIR.
  std::string output_path;
  std::string trace_path;

  // Throws ConfigError naming the offending field.
  void Validate() const;
  nn::ModelSpec Spec() const;
};

struct ResultRow {
  std::string experiment_id;
  int repetition = 0;
  int fold = 0;
  // 0 is the initial model; round r >= 1 is the model after r aggregations.
  int round = 0;
  std::string channel;
  std::optional<double> model_accuracy;
  std::optional<double> inference_accuracy_passive;
  std::optional<double> inference_accuracy_active;
  double aux_ratio = 0.0;
  std::map<std::string, std::string> extra;
  // Non-empty for a repetition that failed at runtime.
  std::string error;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Everything one repetition produces before it is cut into rows.
struct RepetitionData {
  data::Population population;
  data::Population aux;
  std::vector<fl::RoundTrace> honest_traces;
  std::vector<attack::ActiveRound> active_rounds;
};

// The participant population and the adversary's auxiliary clients for
// repetition `rep`. `aux` stays empty when `with_aux` is false.
struct RepetitionPopulations {
  data::Population population;
  data::Population background;
  data::Population aux;
};
RepetitionPopulations MakePopulations(const ExperimentConfig& config, int rep,
                                      bool with_aux = true);

// Builds the channel an experiment uses.
std::unique_ptr<fl::UpdateChannel> MakeChannel(const ExperimentConfig& config,
                                               const nn::ModelSpec& spec,
                                               uint64_t seed);

// Runs repetition `rep` and returns its rows (one per fold x round).
// `data`, when given, receives the traces for diagnostics.
std::vector<ResultRow> RunRepetition(const ExperimentConfig& config, int rep,
                                     RepetitionData* data = nullptr);

// Every repetition, rows ordered by (repetition, fold, round). Writes the
// CSV table and JSON sidecar when output_path is set.
std::vector<ResultRow> RunExperiment(const ExperimentConfig& config);

// Names accepted by Sweep.
bool IsSweepParameter(const std::string& name);
// Returns `config` with the named parameter set to `value`.
ExperimentConfig WithParameter(const ExperimentConfig& config,
                               const std::string& name, double value);

// One RunExperiment per value, master seed shared for paired comparison.
std::vector<ResultRow> Sweep(const ExperimentConfig& config,
                             const std::string& parameter,
                             const std::vector<double>& values);

}  // namespace mixnn::harness

#endif  // MIXNN_HARNESS_EXPERIMENT_H_
