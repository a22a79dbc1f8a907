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

#ifndef MIXNN_ANALYSIS_NEIGHBORS_H_
#define MIXNN_ANALYSIS_NEIGHBORS_H_

#include <span>
#include <utility>
#include <vector>

#include "mixnn/fl/federated.h"
#include "mixnn/nn/model.h"

namespace mixnn::analysis {

struct NeighborReport {
  double radius = 0.0;
  // counts[i]: other participants whose update direction lies within
  // `radius` of participant i's (inclusive).
  std::vector<int> counts;
};

// Pairwise Euclidean distances between update directions
// (update - global_before).
std::vector<std::vector<double>> PairwiseDistances(
    std::span<const fl::ClientUpdate> updates,
    const nn::ModelParams& global_before);

NeighborReport NeighborCounts(std::span<const fl::ClientUpdate> updates,
                              const nn::ModelParams& global_before,
                              double radius);

// Same, from a precomputed distance matrix.
NeighborReport NeighborCountsFromDistances(
    const std::vector<std::vector<double>>& distances, double radius);

// Smallest radius at which every participant has at least one neighbor,
// i.e. the largest nearest-neighbor distance.
double CoveringRadius(const std::vector<std::vector<double>>& distances);

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

// Empirical CDF: distinct values ascending, each with the fraction of
// inputs <= it. Throws ConfigError on empty input.
std::vector<CdfPoint> Cdf(std::span<const double> values);

}  // namespace mixnn::analysis

#endif  // MIXNN_ANALYSIS_NEIGHBORS_H_
