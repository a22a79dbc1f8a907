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

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixnn/errors.h"

namespace mixnn::analysis {

std::vector<std::vector<double>> PairwiseDistances(
    std::span<const fl::ClientUpdate> updates,
    const nn::ModelParams& global_before) {
  if (updates.size() < 2) {
    throw ConfigError("neighbor analysis needs at least two updates");
  }
  std::vector<std::vector<double>> dirs;
  dirs.reserve(updates.size());
  for (const fl::ClientUpdate& u : updates) {
    if (!u.params.SameShape(global_before)) {
      throw DimensionError("neighbor analysis: update shape mismatch");
    }
    dirs.push_back(nn::Flatten(nn::Subtract(u.params, global_before)));
  }
  const size_t c = dirs.size();
  std::vector<std::vector<double>> dist(c, std::vector<double>(c, 0.0));
  for (size_t i = 0; i < c; ++i) {
    for (size_t j = i + 1; j < c; ++j) {
      double sq = 0.0;
      for (size_t k = 0; k < dirs[i].size(); ++k) {
        const double d = dirs[i][k] - dirs[j][k];
        sq += d * d;
      }
      dist[i][j] = dist[j][i] = std::sqrt(sq);
    }
  }
  return dist;
}

NeighborReport NeighborCountsFromDistances(
    const std::vector<std::vector<double>>& distances, double radius) {
  if (!(radius > 0.0)) throw ConfigError("radius must be > 0");
  NeighborReport report;
  report.radius = radius;
  report.counts.assign(distances.size(), 0);
  for (size_t i = 0; i < distances.size(); ++i) {
    for (size_t j = i + 1; j < distances.size(); ++j) {
      if (distances[i][j] <= radius) {
        ++report.counts[i];
        ++report.counts[j];
      }
    }
  }
  return report;
}

NeighborReport NeighborCounts(std::span<const fl::ClientUpdate> updates,
                              const nn::ModelParams& global_before,
                              double radius) {
  if (!(radius > 0.0)) throw ConfigError("radius must be > 0");
  return NeighborCountsFromDistances(PairwiseDistances(updates, global_before),
                                     radius);
}

double CoveringRadius(const std::vector<std::vector<double>>& distances) {
  double worst = 0.0;
  for (size_t i = 0; i < distances.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < distances.size(); ++j) {
      if (i != j) nearest = std::min(nearest, distances[i][j]);
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

std::vector<CdfPoint> Cdf(std::span<const double> values) {
  if (values.empty()) throw ConfigError("cdf of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<CdfPoint> out;
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

}  // namespace mixnn::analysis
