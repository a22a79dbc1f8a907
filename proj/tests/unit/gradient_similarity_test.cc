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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mixnn/errors.h"
#include "mixnn/random.h"
#include "oracles.h"

namespace mixnn::attack {
namespace {

using nn::ModelParams;
using nn::ModelSpec;

ModelSpec Scalar() {
  return ModelSpec{{nn::LayerSpec{1, 1, nn::Activation::kIdentity}}};
}

ModelParams ScalarParams(double v) {
  ModelParams p = nn::Zeros(Scalar());
  p.blocks[0].weights(0, 0) = v;
  return p;
}

data::PopulationConfig AuxConfig(double skew) {
  data::PopulationConfig c;
  c.num_clients = 8;
  c.samples_per_client = 80;
  c.feature_dim = 8;
  c.num_main_classes = 3;
  c.attribute.skew = skew;
  c.attribute_offset_scale = 3.0;
  return c;
}

TEST(CosineTest, AnalyticValues) {
  const std::vector<double> v = {0.3, -2.0, 5.0};
  EXPECT_NEAR(CosineSimilarity(v, v), 1.0, 1e-15);
  EXPECT_EQ(CosineSimilarity(std::vector<double>{1, 0},
                             std::vector<double>{0, 1}),
            0.0);
  EXPECT_NEAR(CosineSimilarity(std::vector<double>{1, 1},
                               std::vector<double>{1, 0}),
              std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(CosineSimilarity(std::vector<double>{1, 2},
                               std::vector<double>{-2, -4}),
              -1.0, 1e-15);
}

TEST(CosineTest, DegenerateAndMismatch) {
  EXPECT_EQ(CosineSimilarity(std::vector<double>{0, 0},
                             std::vector<double>{1, 2}),
            0.0);
  EXPECT_THROW(CosineSimilarity(std::vector<double>{1},
                                std::vector<double>{1, 2}),
               DimensionError);
}

TEST(ArgmaxTest, TiesGoToLowestIndex) {
  EXPECT_EQ(ArgmaxLowestIndex(std::vector<double>{0.2, 0.7, 0.7}), 1);
  EXPECT_EQ(ArgmaxLowestIndex(std::vector<double>{0.0, 0.0}), 0);
  EXPECT_EQ(ArgmaxLowestIndex(std::vector<double>{-1.0, -0.5}), 1);
}

TEST(UpdateDirectionTest, Basics) {
  std::mt19937_64 gen(1);
  const ModelSpec spec = testing::RandomSpec(gen, 3, 5);
  const ModelParams g = testing::RandomParams(spec, gen);
  for (double v : UpdateDirection(g, g)) EXPECT_EQ(v, 0.0);

  std::vector<double> flat = nn::Flatten(g);
  const size_t j = flat.size() / 2;
  flat[j] += 1.0;
  const auto d = UpdateDirection(nn::Unflatten(flat, spec), g);
  for (size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(d[i], i == j ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_THROW(UpdateDirection(g, nn::Zeros(Scalar())), DimensionError);
}

TEST(UpdateDirectionTest, SingleSgdStepIsAntiparallelToGradient) {
  const data::Population pop = data::GeneratePopulation(AuxConfig(1.0));
  const ModelSpec spec = ModelSpec::Dense(8, {6}, 3);
  const ModelParams global = nn::InitParams(spec, 3);
  fl::RoundConfig config;
  config.local_epochs = 1;
  config.batch_size = 1000;
  const auto u = fl::LocalTrain(pop.clients[0], global, spec, config, 0);
  const auto grad =
      nn::Flatten(nn::LossAndGradient(global, spec, pop.clients[0].train).grad);
  EXPECT_NEAR(CosineSimilarity(UpdateDirection(u.params, global), grad), -1.0,
              1e-12);
}

TEST(ScoreTest, SelfMatchAndScaleInvariance) {
  std::mt19937_64 gen(2);
  const ModelSpec spec = testing::RandomSpec(gen, 3, 5);
  const ModelParams global = testing::RandomParams(spec, gen);
  ReferenceModels refs;
  for (int a = 0; a < 3; ++a) {
    refs.per_class.push_back(testing::RandomParams(spec, gen));
  }
  std::vector<fl::ClientUpdate> observed;
  for (int a = 0; a < 3; ++a) observed.push_back({a, refs.per_class[a]});
  const auto scores = ScoreUpdates(observed, global, refs);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(ArgmaxLowestIndex(scores[a]), a);
    EXPECT_NEAR(scores[a][a], 1.0, 1e-12);
  }

  // Random observations, then the same directions scaled by positive factors.
  std::vector<fl::ClientUpdate> random = testing::RandomUpdates(spec, 6, gen);
  std::vector<fl::ClientUpdate> scaled = random;
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (auto& u : scaled) {
    u.params = nn::Add(global, nn::Scale(nn::Subtract(u.params, global),
                                         factor(gen)));
  }
  ScoreAccumulator plain(false), stretched(false);
  const auto p1 = plain.AddRound(0, ScoreUpdates(random, global, refs));
  const auto p2 = stretched.AddRound(0, ScoreUpdates(scaled, global, refs));
  for (size_t i = 0; i < p1.size(); ++i) {
    EXPECT_EQ(p1[i].predicted, p2[i].predicted);
  }
}

TEST(ScoreTest, ZeroDirectionFallsToClassZero) {
  ReferenceModels refs{{ScalarParams(1.0), ScalarParams(-1.0)}};
  std::vector<fl::ClientUpdate> observed = {{0, ScalarParams(0.0)}};
  ScoreAccumulator acc(false);
  const auto preds =
      acc.AddRound(0, ScoreUpdates(observed, ScalarParams(0.0), refs));
  EXPECT_EQ(preds[0].scores, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(preds[0].predicted, 0);
}

TEST(AccumulatorTest, SumsPerSlotAcrossRounds) {
  ScoreAccumulator acc(true);
  acc.AddRound(0, {{0.9, 0.1}, {0.2, 0.3}});
  const auto preds = acc.AddRound(1, {{-0.5, 0.1}, {0.6, 0.0}});
  EXPECT_EQ(preds[0].predicted, 0);  // 0.4 vs 0.2
  EXPECT_EQ(preds[1].predicted, 0);  // 0.8 vs 0.3
  EXPECT_NEAR(preds[0].scores[0], 0.4, 1e-15);
  EXPECT_EQ(preds[1].round_index, 1);

  ScoreAccumulator fresh(false);
  fresh.AddRound(0, {{0.9, 0.1}});
  EXPECT_EQ(fresh.AddRound(1, {{-0.5, 0.1}})[0].predicted, 1);
}

TEST(CraftTest, MidpointAndCentroid) {
  std::mt19937_64 gen(3);
  const ModelSpec spec = testing::RandomSpec(gen, 3, 5);
  ReferenceModels two{{testing::RandomParams(spec, gen),
                       testing::RandomParams(spec, gen)}};
  const ModelParams mid = CraftActiveModel(two);
  auto dist = [](const ModelParams& a, const ModelParams& b) {
    double s = 0.0;
    for (double v : nn::Flatten(nn::Subtract(a, b))) s += v * v;
    return std::sqrt(s);
  };
  EXPECT_NEAR(dist(mid, two.per_class[0]), dist(mid, two.per_class[1]),
              1e-12);

  ReferenceModels same{{two.per_class[0], two.per_class[0]}};
  EXPECT_EQ(CraftActiveModel(same), two.per_class[0]);

  ReferenceModels three{{ScalarParams(0), ScalarParams(1), ScalarParams(5)}};
  EXPECT_DOUBLE_EQ(CraftActiveModel(three).blocks[0].weights(0, 0), 2.0);

  ReferenceModels one{{ScalarParams(1)}};
  EXPECT_THROW(CraftActiveModel(one), ConfigError);
}

TEST(ReferenceTest, RejectsMissingClassAndZeroRounds) {
  const data::Population pop = data::GeneratePopulation(AuxConfig(1.0));
  const ModelSpec spec = ModelSpec::Dense(8, {4}, 3);
  const ModelParams g = nn::InitParams(spec, 1);
  std::vector<size_t> only_zero;
  for (size_t i = 0; i < pop.size(); ++i) {
    if (pop.clients[i].attribute == 0) only_zero.push_back(i);
  }
  EXPECT_THROW(BuildReferences(pop.Subset(only_zero), g, spec,
                               fl::RoundConfig{}, 2, 1),
               ConfigError);
  EXPECT_THROW(BuildReferences(pop, g, spec, fl::RoundConfig{}, 0, 1),
               ConfigError);
}

TEST(ReferenceTest, OneRoundOneClientIsLocalTraining) {
  const data::Population pop = data::GeneratePopulation(AuxConfig(1.0));
  std::vector<size_t> pick = {0};
  for (size_t i = 1; i < pop.size(); ++i) {
    if (pop.clients[i].attribute != pop.clients[0].attribute) {
      pick.push_back(i);
      break;
    }
  }
  const data::Population aux = pop.Subset(pick);
  const ModelSpec spec = ModelSpec::Dense(8, {4}, 3);
  const ModelParams g = nn::InitParams(spec, 1);
  fl::RoundConfig training;
  const ReferenceModels refs = BuildReferences(aux, g, spec, training, 1, 17);
  fl::RoundConfig expected_cfg = training;
  expected_cfg.seed = StreamSeed(17, Stream::kReference);
  for (const auto& client : aux.clients) {
    EXPECT_EQ(refs.per_class[client.attribute],
              fl::LocalTrain(client, g, spec, expected_cfg, 0).params);
  }
}

TEST(ReferenceTest, IdenticalAuxiliaryDataGivesIdenticalReferences) {
  data::Population pop = data::GeneratePopulation(AuxConfig(0.0));
  data::Population twin = pop.Subset({0, 0});
  twin.clients[1].attribute = 1 - twin.clients[0].attribute;
  const ModelSpec spec = ModelSpec::Dense(8, {4}, 3);
  const ModelParams g = nn::InitParams(spec, 1);
  const ReferenceModels refs =
      BuildReferences(twin, g, spec, fl::RoundConfig{}, 3, 5);
  EXPECT_EQ(refs.per_class[0], refs.per_class[1]);
  std::vector<fl::ClientUpdate> observed = {{0, refs.per_class[1]}};
  EXPECT_EQ(InferPassive(fl::RoundTrace{0, g, observed, {{0, 0}}, g, observed},
                         refs)[0]
                .predicted,
            0);
}

TEST(ReferenceTest, SkewedClassesGiveDistinctDirections) {
  const data::Population pop = data::GeneratePopulation(AuxConfig(1.0));
  const ModelSpec spec = ModelSpec::Dense(8, {6}, 3);
  const ModelParams g = nn::InitParams(spec, 2);
  const ReferenceModels refs =
      BuildReferences(pop, g, spec, fl::RoundConfig{}, 5, 3);
  EXPECT_LT(CosineSimilarity(UpdateDirection(refs.per_class[0], g),
                             UpdateDirection(refs.per_class[1], g)),
            0.99);
}

TEST(InferenceAccuracyTest, CountsMatches) {
  std::vector<AttackPrediction> preds(4);
  for (int i = 0; i < 4; ++i) preds[i].predicted = preds[i].truth = i % 2;
  EXPECT_EQ(InferenceAccuracy(preds), 1.0);
  preds[0].predicted = 1;
  EXPECT_EQ(InferenceAccuracy(preds), 0.75);
  EXPECT_THROW(InferenceAccuracy(std::vector<AttackPrediction>{}),
               ConfigError);
}

TEST(InferenceAccuracyTest, CoinFlipsScoreChance) {
  std::mt19937_64 gen(4);
  std::vector<AttackPrediction> preds(1000);
  for (auto& p : preds) {
    p.predicted = static_cast<int>(gen() % 2);
    p.truth = static_cast<int>(gen() % 2);
  }
  EXPECT_NEAR(InferenceAccuracy(preds), 0.5, 0.05);
}

TEST(GroundTruthTest, RulesReadTheTrace) {
  data::Population pop = data::GeneratePopulation(AuxConfig(1.0));
  fl::RoundTrace trace;
  trace.layer_origins = {{3, 0}, {0, 3}};
  trace.per_client_sent = {{0, {}}, {3, {}}};
  std::vector<AttackPrediction> preds(2);
  preds[1].slot = 1;
  AssignGroundTruth(preds, trace, pop, GroundTruthRule::kFirstLayerOrigin);
  EXPECT_EQ(preds[0].truth, pop.clients[3].attribute);
  EXPECT_EQ(preds[1].truth, pop.clients[0].attribute);
  AssignGroundTruth(preds, trace, pop, GroundTruthRule::kSlotParticipant);
  EXPECT_EQ(preds[0].truth, pop.clients[0].attribute);
  EXPECT_EQ(preds[1].truth, pop.clients[3].attribute);
  EXPECT_EQ(ParseGroundTruthRule("first-layer-origin"),
            GroundTruthRule::kFirstLayerOrigin);
  EXPECT_THROW(ParseGroundTruthRule("majority"), ConfigError);
}

TEST(ActiveTest, DisseminatesCentroidOfReferences) {
  data::PopulationConfig pc = AuxConfig(1.0);
  const data::Population pop = data::GeneratePopulation(pc);
  pc.seed = 99;
  const data::Population aux = data::GeneratePopulation(pc);
  const ModelSpec spec = ModelSpec::Dense(8, {6}, 3);
  const ModelParams init = nn::InitParams(spec, 4);
  fl::DirectChannel direct;
  const auto rounds = InferActive(pop, aux, spec, init, fl::RoundConfig{},
                                  AttackConfig{}, direct, 3,
                                  GroundTruthRule::kFirstLayerOrigin, 8);
  ASSERT_EQ(rounds.size(), 3u);
  for (const auto& r : rounds) {
    EXPECT_EQ(r.trace.global_before, CraftActiveModel(r.refs));
    EXPECT_EQ(r.predictions.size(), pop.size());
    for (const auto& p : r.predictions) EXPECT_GE(p.truth, 0);
  }
  EXPECT_NE(rounds[1].refs.per_class[0], rounds[0].refs.per_class[0]);

  AttackConfig once;
  once.rebuild_each_round = false;
  const auto fixed = InferActive(pop, aux, spec, init, fl::RoundConfig{}, once,
                                 direct, 2, GroundTruthRule::kFirstLayerOrigin,
                                 8);
  EXPECT_EQ(fixed[1].refs.per_class[0], fixed[0].refs.per_class[0]);
  EXPECT_EQ(fixed[1].trace.global_before, fixed[0].trace.global_before);
}

}  // namespace
}  // namespace mixnn::attack
