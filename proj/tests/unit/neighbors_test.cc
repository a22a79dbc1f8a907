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

#include "mixnn/analysis/neighbors.h"

#include <random>

#include <gtest/gtest.h>

#include "mixnn/errors.h"
#include "oracles.h"

namespace mixnn::analysis {
namespace {

TEST(NeighborsTest, MatchesBruteForce) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 30; ++trial) {
    const nn::ModelSpec spec = testing::RandomSpec(gen, 3, 4);
    const int c = 2 + static_cast<int>(gen() % 15);
    const auto updates = testing::RandomUpdates(spec, c, gen);
    const nn::ModelParams base = testing::RandomParams(spec, gen);
    const auto dist = PairwiseDistances(updates, base);
    for (double quantile : {0.1, 0.5, 0.9}) {
      std::vector<double> all;
      for (int i = 0; i < c; ++i) {
        for (int j = i + 1; j < c; ++j) all.push_back(dist[i][j]);
      }
      std::sort(all.begin(), all.end());
      const double r = all[static_cast<size_t>(quantile * (all.size() - 1))];
      EXPECT_EQ(NeighborCounts(updates, base, r).counts,
                testing::BruteForceNeighborCounts(updates, base, r));
    }
  }
}

TEST(NeighborsTest, RadiusIsInclusive) {
  const nn::ModelSpec spec{{nn::LayerSpec{1, 1, nn::Activation::kIdentity}}};
  std::vector<fl::ClientUpdate> updates;
  for (double v : {0.0, 0.5, 2.0}) {
    nn::ModelParams p = nn::Zeros(spec);
    p.blocks[0].weights(0, 0) = v;
    updates.push_back({0, p});
  }
  const auto report = NeighborCounts(updates, nn::Zeros(spec), 0.5);
  EXPECT_EQ(report.counts, (std::vector<int>{1, 1, 0}));
  EXPECT_DOUBLE_EQ(CoveringRadius(PairwiseDistances(updates, nn::Zeros(spec))),
                   1.5);
}

TEST(NeighborsTest, CoveringRadiusGivesEveryoneANeighbor) {
  std::mt19937_64 gen(2);
  const nn::ModelSpec spec = testing::RandomSpec(gen, 2, 4);
  const auto updates = testing::RandomUpdates(spec, 9, gen);
  const auto dist = PairwiseDistances(updates, nn::Zeros(spec));
  const double r = CoveringRadius(dist);
  for (int n : NeighborCountsFromDistances(dist, r).counts) EXPECT_GE(n, 1);
  int isolated = 0;
  for (int n : NeighborCountsFromDistances(dist, r * (1 - 1e-9)).counts) {
    isolated += n == 0 ? 1 : 0;
  }
  EXPECT_GE(isolated, 1);
}

TEST(NeighborsTest, NonPositiveRadiusRejected) {
  std::vector<std::vector<double>> dist = {{0, 1}, {1, 0}};
  EXPECT_THROW(NeighborCountsFromDistances(dist, 0.0), ConfigError);
}

TEST(CdfTest, MatchesSortOracle) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> small(0, 6);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> v(1 + gen() % 40);
    for (double& x : v) x = small(gen) * 0.5;
    const auto got = Cdf(v);
    const auto expected = testing::SortCdf(v);
    ASSERT_EQ(got.size(), expected.size());
    for (size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].value, expected[i].first);
      EXPECT_DOUBLE_EQ(got[i].fraction, expected[i].second);
    }
    EXPECT_DOUBLE_EQ(got.back().fraction, 1.0);
  }
}

TEST(CdfTest, EmptyRejected) {
  EXPECT_THROW(Cdf(std::vector<double>{}), ConfigError);
}

}  // namespace
}  // namespace mixnn::analysis
