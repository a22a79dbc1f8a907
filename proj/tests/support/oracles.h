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

// Independent reference implementations used as test oracles. Nothing here
// calls into the library code it is meant to check.

#ifndef MIXNN_TESTS_SUPPORT_ORACLES_H_
#define MIXNN_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mixnn/fl/federated.h"
#include "mixnn/nn/model.h"

namespace mixnn::testing {

// Random dense spec with 1 to `max_layers` layers of at most `max_units`
// units, relu hidden layers and a softmax output of >= 2 classes.
nn::ModelSpec RandomSpec(std::mt19937_64& gen, int max_layers, int max_units);

// Every scalar uniform in [-scale, scale].
nn::ModelParams RandomParams(const nn::ModelSpec& spec, std::mt19937_64& gen,
                             double scale = 1.0);

nn::Batch RandomBatch(const nn::ModelSpec& spec, int rows,
                      std::mt19937_64& gen);

// Straight-line forward pass with explicit loops.
std::vector<std::vector<double>> NaiveForward(
    const nn::ModelParams& params, const nn::ModelSpec& spec,
    const std::vector<std::vector<double>>& inputs);

// Mean cross-entropy computed from NaiveForward.
double NaiveLoss(const nn::ModelParams& params, const nn::ModelSpec& spec,
                 const nn::Batch& batch);

// Smallest |pre-activation| over all relu units and rows. Central
// differences are only meaningful when this exceeds the step.
double MinReluMargin(const nn::ModelParams& params, const nn::ModelSpec& spec,
                     const nn::Batch& batch);

struct GradientCheck {
  int checked = 0;
  int failures = 0;
  double worst_relative = 0.0;  // Over scalars larger than abs_floor.
};

// Compares every analytic gradient scalar with a central difference of
// NaiveLoss: |fd - g| <= rel * max(|fd|, |g|) + abs_floor.
GradientCheck CheckGradient(const nn::ModelParams& params,
                            const nn::ModelSpec& spec, const nn::Batch& batch,
                            const nn::ModelParams& analytic, double step,
                            double rel, double abs_floor);

// Per-scalar mean using Neumaier-compensated sums over flattened updates.
std::vector<double> CompensatedMean(std::span<const fl::ClientUpdate> updates);

// Counts j != i with |d_i - d_j| <= radius, by direct double loop over
// flattened directions.
std::vector<int> BruteForceNeighborCounts(
    std::span<const fl::ClientUpdate> updates,
    const nn::ModelParams& global_before, double radius);

// (value, fraction <= value) for each distinct value, from a sorted copy.
std::vector<std::pair<double, double>> SortCdf(std::vector<double> values);

// Per layer, the sorted list of flattened blocks. Two update lists with
// equal fingerprints hold the same multiset of blocks in every layer.
std::vector<std::vector<std::vector<double>>> LayerMultisets(
    std::span<const fl::ClientUpdate> updates);

// Random updates for a spec, with distinct values so multisets are
// informative.
std::vector<fl::ClientUpdate> RandomUpdates(const nn::ModelSpec& spec,
                                            int count, std::mt19937_64& gen);

}  // namespace mixnn::testing

#endif  // MIXNN_TESTS_SUPPORT_ORACLES_H_
