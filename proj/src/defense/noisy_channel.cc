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

#include "mixnn/defense/noisy_channel.h"

#include <cmath>
#include <random>

#include "mixnn/errors.h"
#include "mixnn/random.h"

namespace mixnn::defense {

void NoiseConfig::Validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("noise.sigma must be a finite value >= 0");
  }
}

std::vector<fl::ClientUpdate> AddNoise(std::vector<fl::ClientUpdate> updates,
                                       const NoiseConfig& config,
                                       int round_index) {
  config.Validate();
  if (config.sigma == 0.0) return updates;
  for (size_t slot = 0; slot < updates.size(); ++slot) {
    fl::ClientUpdate& u = updates[slot];
    // Anonymous updates fall back to their slot position.
    const auto who = static_cast<uint64_t>(
        u.origin_id.has_value() ? *u.origin_id
                                : -1 - static_cast<int64_t>(slot));
    Rng rng(StreamSeed(config.seed, Stream::kNoise,
                       {who, static_cast<uint64_t>(round_index)}));
    std::normal_distribution<double> noise(0.0, config.sigma);
    for (nn::LayerBlock& b : u.params.blocks) {
      for (Eigen::Index i = 0; i < b.weights.size(); ++i) {
        b.weights.data()[i] += noise(rng);
      }
      for (Eigen::Index i = 0; i < b.bias.size(); ++i) b.bias(i) += noise(rng);
    }
  }
  return updates;
}

NoisyChannel::NoisyChannel(NoiseConfig config) : config_(config) {
  config_.Validate();
}

fl::ChannelOutput NoisyChannel::Transmit(std::vector<fl::ClientUpdate> sent,
                                         int round_index) {
  fl::ChannelOutput out;
  for (const fl::ClientUpdate& u : sent) {
    out.layer_origins.emplace_back(u.params.num_layers(),
                                   u.origin_id.value_or(-1));
  }
  out.updates = AddNoise(std::move(sent), config_, round_index);
  return out;
}

}  // namespace mixnn::defense
