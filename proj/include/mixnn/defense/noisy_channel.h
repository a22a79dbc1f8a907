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

#ifndef MIXNN_DEFENSE_NOISY_CHANNEL_H_
#define MIXNN_DEFENSE_NOISY_CHANNEL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mixnn/fl/federated.h"

namespace mixnn::defense {

struct NoiseConfig {
  double sigma = 1.0;
  uint64_t seed = 1;

  void Validate() const;
};

// Adds independent N(0, sigma^2) noise to every scalar of every update.
// Origins are kept: the server still sees who sent what. The noise stream
// of an update depends only on (seed, origin id, round), so the result does
// not depend on processing order.
std::vector<fl::ClientUpdate> AddNoise(std::vector<fl::ClientUpdate> updates,
                                       const NoiseConfig& config,
                                       int round_index);

class NoisyChannel final : public fl::UpdateChannel {
 public:
  explicit NoisyChannel(NoiseConfig config);
  std::string name() const override { return "noisy"; }
  fl::ChannelOutput Transmit(std::vector<fl::ClientUpdate> sent,
                             int round_index) override;

 private:
  NoiseConfig config_;
};

}  // namespace mixnn::defense

#endif  // MIXNN_DEFENSE_NOISY_CHANNEL_H_
