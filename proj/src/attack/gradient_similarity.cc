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

#include "mixnn/attack/gradient_similarity.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixnn/errors.h"
#include "mixnn/random.h"

namespace mixnn::attack {

void AttackConfig::Validate() const {
  if (!(aux_ratio > 0.0 && aux_ratio <= 1.0)) {
    throw ConfigError("attack.aux_ratio must lie in (0, 1]");
  }
  if (reference_rounds < 1) {
    throw ConfigError("attack.reference_rounds must be >= 1");
  }
}

std::string GroundTruthRuleName(GroundTruthRule rule) {
  return rule == GroundTruthRule::kFirstLayerOrigin ? "first-layer-origin"
                                                    : "slot-participant";
}

GroundTruthRule ParseGroundTruthRule(const std::string& name) {
  if (name == "first-layer-origin") return GroundTruthRule::kFirstLayerOrigin;
  if (name == "slot-participant") return GroundTruthRule::kSlotParticipant;
  throw ConfigError("unknown ground-truth rule '" + name + "'");
}

ReferenceModels BuildReferences(const data::Population& aux,
                                const nn::ModelParams& global,
                                const nn::ModelSpec& spec,
                                const fl::RoundConfig& training,
                                int reference_rounds, uint64_t seed) {
  if (reference_rounds < 1) {
    throw ConfigError("attack.reference_rounds must be >= 1");
  }
  ReferenceModels refs;
  fl::DirectChannel direct;
  for (int a = 0; a < aux.num_attribute_classes; ++a) {
    std::vector<size_t> members;
    for (size_t i = 0; i < aux.size(); ++i) {
      if (aux.clients[i].attribute == a) members.push_back(i);
    }
    if (members.empty()) {
      throw ConfigError("no auxiliary client for attribute class " +
                        std::to_string(a));
    }
    const data::Population subset = aux.Subset(members);
    fl::RoundConfig cfg = training;
    cfg.participants_per_round = 0;
    // Class-independent, so identical auxiliary data gives identical
    // references.
    cfg.seed = StreamSeed(seed, Stream::kReference);
    nn::ModelParams model = global;
    for (int r = 0; r < reference_rounds; ++r) {
      model = fl::RunRound(subset, model, spec, cfg, direct, r).global_after;
    }
    refs.per_class.push_back(std::move(model));
  }
  return refs;
}

std::vector<double> UpdateDirection(const nn::ModelParams& observed,
                                    const nn::ModelParams& global_before) {
  if (!observed.SameShape(global_before)) {
    throw DimensionError("update direction: shape mismatch");
  }
  return nn::Flatten(nn::Subtract(observed, global_before));
}

double CosineSimilarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine similarity: lengths " +
                         std::to_string(u.size()) + " and " +
                         std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  const double nu = std::sqrt(uu);
  const double nv = std::sqrt(vv);
  if (nu < kDegenerateNorm || nv < kDegenerateNorm) return 0.0;
  return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

int ArgmaxLowestIndex(std::span<const double> scores) {
  int best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[static_cast<size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<std::vector<double>> ScoreUpdates(
    std::span<const fl::ClientUpdate> observed,
    const nn::ModelParams& global_before, const ReferenceModels& refs) {
  std::vector<std::vector<double>> ref_dirs;
  ref_dirs.reserve(refs.num_classes());
  for (const nn::ModelParams& r : refs.per_class) {
    ref_dirs.push_back(UpdateDirection(r, global_before));
  }
  std::vector<std::vector<double>> scores;
  scores.reserve(observed.size());
  for (const fl::ClientUpdate& u : observed) {
    const std::vector<double> dir = UpdateDirection(u.params, global_before);
    std::vector<double> row;
    row.reserve(ref_dirs.size());
    for (const std::vector<double>& rd : ref_dirs) {
      row.push_back(CosineSimilarity(dir, rd));
    }
    scores.push_back(std::move(row));
  }
  return scores;
}

std::vector<AttackPrediction> ScoreAccumulator::AddRound(
    int round_index, const std::vector<std::vector<double>>& scores) {
  if (!accumulate_ || totals_.size() != scores.size()) {
    totals_ = scores;
  } else {
    for (size_t s = 0; s < scores.size(); ++s) {
      if (totals_[s].size() != scores[s].size()) {
        throw DimensionError("score accumulation: class count changed");
      }
      for (size_t a = 0; a < scores[s].size(); ++a) {
        totals_[s][a] += scores[s][a];
      }
    }
  }
  std::vector<AttackPrediction> preds;
  preds.reserve(totals_.size());
  for (size_t s = 0; s < totals_.size(); ++s) {
    AttackPrediction p;
    p.round_index = round_index;
    p.slot = static_cast<int>(s);
    p.scores = totals_[s];
    p.predicted = ArgmaxLowestIndex(p.scores);
    preds.push_back(std::move(p));
  }
  return preds;
}

std::vector<AttackPrediction> InferPassive(const fl::RoundTrace& trace,
                                           const ReferenceModels& refs) {
  ScoreAccumulator acc(false);
  return acc.AddRound(trace.round_index,
                      ScoreUpdates(trace.updates_received,
                                   trace.global_before, refs));
}

std::vector<std::vector<AttackPrediction>> InferPassive(
    std::span<const fl::RoundTrace> traces,
    std::span<const ReferenceModels> refs, bool multi_round_accumulation) {
  if (traces.size() != refs.size()) {
    throw DimensionError("passive inference: one reference set per round");
  }
  ScoreAccumulator acc(multi_round_accumulation);
  std::vector<std::vector<AttackPrediction>> out;
  for (size_t r = 0; r < traces.size(); ++r) {
    out.push_back(acc.AddRound(
        traces[r].round_index,
        ScoreUpdates(traces[r].updates_received, traces[r].global_before,
                     refs[r])));
  }
  return out;
}

nn::ModelParams CraftActiveModel(const ReferenceModels& refs) {
  if (refs.num_classes() < 2) {
    throw ConfigError("active model needs at least two references");
  }
  std::vector<const nn::ModelParams*> models;
  for (const nn::ModelParams& r : refs.per_class) {
    if (!r.SameShape(refs.per_class.front())) {
      throw DimensionError("reference models differ in shape");
    }
    models.push_back(&r);
  }
  return nn::Mean(models);
}

void AssignGroundTruth(std::vector<AttackPrediction>& preds,
                       const fl::RoundTrace& trace,
                       const data::Population& pop, GroundTruthRule rule) {
  std::vector<int> attribute_of;
  for (const data::ClientRecord& c : pop.clients) {
    if (c.client_id >= static_cast<int>(attribute_of.size())) {
      attribute_of.resize(static_cast<size_t>(c.client_id) + 1, -1);
    }
    attribute_of[static_cast<size_t>(c.client_id)] = c.attribute;
  }
  auto lookup = [&](int id) {
    if (id < 0 || id >= static_cast<int>(attribute_of.size()) ||
        attribute_of[static_cast<size_t>(id)] < 0) {
      throw ConfigError("ground truth: unknown client " + std::to_string(id));
    }
    return attribute_of[static_cast<size_t>(id)];
  };
  for (AttackPrediction& p : preds) {
    const auto slot = static_cast<size_t>(p.slot);
    switch (rule) {
      case GroundTruthRule::kFirstLayerOrigin:
        p.truth = lookup(trace.layer_origins.at(slot).at(0));
        break;
      case GroundTruthRule::kSlotParticipant:
        p.truth = lookup(
            trace.per_client_sent.at(slot).origin_id.value_or(-1));
        break;
    }
  }
}

std::vector<ActiveRound> InferActive(const data::Population& pop,
                                     const data::Population& aux,
                                     const nn::ModelSpec& spec,
                                     const nn::ModelParams& initial,
                                     const fl::RoundConfig& training,
                                     const AttackConfig& config,
                                     fl::UpdateChannel& channel, int rounds,
                                     GroundTruthRule rule, uint64_t seed) {
  config.Validate();
  std::vector<ActiveRound> out;
  ScoreAccumulator acc(config.multi_round_accumulation);
  // The crafted lineage: references are trained from the previously
  // disseminated model, and the next dissemination is their centroid.
  nn::ModelParams anchor = initial;
  nn::ModelParams crafted;
  ReferenceModels refs;
  for (int r = 0; r < rounds; ++r) {
    if (r == 0 || config.rebuild_each_round) {
      refs = BuildReferences(
          aux, anchor, spec, training, config.reference_rounds,
          StreamSeed(seed, Stream::kReference, {static_cast<uint64_t>(r)}));
      crafted = CraftActiveModel(refs);
      anchor = crafted;
    }
    ActiveRound round;
    round.trace = fl::RunRound(pop, crafted, spec, training, channel, r);
    round.predictions = acc.AddRound(
        r, ScoreUpdates(round.trace.updates_received,
                        round.trace.global_before, refs));
    AssignGroundTruth(round.predictions, round.trace, pop, rule);
    round.refs = refs;
    out.push_back(std::move(round));
  }
  return out;
}

double InferenceAccuracy(std::span<const AttackPrediction> preds) {
  if (preds.empty()) throw ConfigError("inference accuracy of no predictions");
  size_t correct = 0;
  for (const AttackPrediction& p : preds) {
    if (p.truth < 0) throw ConfigError("prediction without ground truth");
    correct += p.predicted == p.truth ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(preds.size());
}

}  // namespace mixnn::attack
