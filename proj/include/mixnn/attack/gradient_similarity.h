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

#ifndef MIXNN_ATTACK_GRADIENT_SIMILARITY_H_
#define MIXNN_ATTACK_GRADIENT_SIMILARITY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mixnn/data/population.h"
#include "mixnn/fl/federated.h"
#include "mixnn/nn/model.h"

// Gradient-similarity attribute inference: a server scores each received
// update direction against reference directions obtained by training on
// auxiliary data of one attribute class at a time.
namespace mixnn::attack {

struct AttackConfig {
  // Fraction of each attribute class of the background population used as
  // auxiliary knowledge.
  double aux_ratio = 0.8;
  // Simulated federated rounds used to train each reference model.
  int reference_rounds = 5;
  // Sum cosine scores per update slot across rounds.
  bool multi_round_accumulation = true;
  // Active mode: rebuild references from the crafted model every round
  // instead of once at attack start.
  bool rebuild_each_round = true;

  void Validate() const;
};

// How a prediction is matched to a participant when the server cannot know
// who sent an update.
enum class GroundTruthRule {
  // The participant that contributed layer 1 of the received update.
  kFirstLayerOrigin,
  // The participant whose slot the update occupies, i.e. the client the
  // server would associate with that position.
  kSlotParticipant,
};

std::string GroundTruthRuleName(GroundTruthRule rule);
GroundTruthRule ParseGroundTruthRule(const std::string& name);

// One model per attribute class, index = class.
struct ReferenceModels {
  std::vector<nn::ModelParams> per_class;

  size_t num_classes() const { return per_class.size(); }
};

// For each attribute class a, runs `reference_rounds` federated rounds over
// only the class-a clients of `aux`, starting from `global`. Every class
// trains with `training` reseeded to StreamSeed(seed, Stream::kReference).
ReferenceModels BuildReferences(const data::Population& aux,
                                const nn::ModelParams& global,
                                const nn::ModelSpec& spec,
                                const fl::RoundConfig& training,
                                int reference_rounds, uint64_t seed);

// flatten(observed - global_before).
std::vector<double> UpdateDirection(const nn::ModelParams& observed,
                                    const nn::ModelParams& global_before);

inline constexpr double kDegenerateNorm = 1e-12;

// u.v / (|u| |v|), or 0 when either norm is below kDegenerateNorm.
double CosineSimilarity(std::span<const double> u, std::span<const double> v);

// Index of the largest score; ties go to the lowest index.
int ArgmaxLowestIndex(std::span<const double> scores);

struct AttackPrediction {
  int round_index = 0;
  int slot = 0;
  int predicted = 0;
  std::vector<double> scores;
  // -1 until assigned by the harness.
  int truth = -1;
};

// scores[slot][a] = cosine(direction(update_slot), direction(reference_a)).
std::vector<std::vector<double>> ScoreUpdates(
    std::span<const fl::ClientUpdate> observed,
    const nn::ModelParams& global_before, const ReferenceModels& refs);

// Accumulates per-slot scores over rounds (when enabled) and turns them
// into predictions.
class ScoreAccumulator {
 public:
  explicit ScoreAccumulator(bool accumulate) : accumulate_(accumulate) {}

  std::vector<AttackPrediction> AddRound(
      int round_index, const std::vector<std::vector<double>>& scores);

 private:
  bool accumulate_;
  std::vector<std::vector<double>> totals_;
};

// Passive scoring of a single round.
std::vector<AttackPrediction> InferPassive(const fl::RoundTrace& trace,
                                           const ReferenceModels& refs);

// Passive scoring over consecutive rounds; refs[r] must be built against
// traces[r].global_before.
std::vector<std::vector<AttackPrediction>> InferPassive(
    std::span<const fl::RoundTrace> traces,
    std::span<const ReferenceModels> refs, bool multi_round_accumulation);

// Per-scalar mean of the references: the midpoint for two classes, the
// centroid otherwise.
nn::ModelParams CraftActiveModel(const ReferenceModels& refs);

// Fills AttackPrediction::truth from the trace's layer origins.
void AssignGroundTruth(std::vector<AttackPrediction>& preds,
                       const fl::RoundTrace& trace,
                       const data::Population& pop, GroundTruthRule rule);

struct ActiveRound {
  fl::RoundTrace trace;
  ReferenceModels refs;
  std::vector<AttackPrediction> predictions;
};

// Malicious server: each round it trains references from the model it last
// disseminated, sends their centroid to the participants and scores the
// returned updates against those references. Honest aggregates are still
// recorded in the traces so utility stays measurable.
std::vector<ActiveRound> InferActive(const data::Population& pop,
                                     const data::Population& aux,
                                     const nn::ModelSpec& spec,
                                     const nn::ModelParams& initial,
                                     const fl::RoundConfig& training,
                                     const AttackConfig& config,
                                     fl::UpdateChannel& channel, int rounds,
                                     GroundTruthRule rule, uint64_t seed);

// Fraction of predictions equal to their ground truth.
double InferenceAccuracy(std::span<const AttackPrediction> preds);

}  // namespace mixnn::attack

#endif  // MIXNN_ATTACK_GRADIENT_SIMILARITY_H_
