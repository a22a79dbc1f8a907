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

#ifndef MIXNN_FL_FEDERATED_H_
#define MIXNN_FL_FEDERATED_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnn/data/population.h"
#include "mixnn/nn/model.h"
#include "mixnn/nn/optimizer.h"

namespace mixnn::fl {

struct RoundConfig {
  int num_rounds = 10;
  int local_epochs = 2;
  int batch_size = 32;
  // 0 means every client of the population takes part in every round.
  int participants_per_round = 0;
  nn::OptimizerConfig optimizer;
  uint64_t seed = 1;

  void Validate() const;
  // Number of participants for a population of `population_size` clients.
  size_t Participants(size_t population_size) const;
};

// Parameters leaving a client. `origin_id` is erased by anonymizing
// channels before anything reaches the server.
struct ClientUpdate {
  std::optional<int> origin_id;
  nn::ModelParams params;
};

// What a channel delivers to the server. `layer_origins[slot][t]` names the
// client whose layer t fills that slot; it is simulation bookkeeping and is
// never shown to the attack.
struct ChannelOutput {
  std::vector<ClientUpdate> updates;
  std::vector<std::vector<int>> layer_origins;
};

// Path from the clients to the aggregation server.
class UpdateChannel {
 public:
  virtual ~UpdateChannel() = default;
  virtual std::string name() const = 0;
  virtual ChannelOutput Transmit(std::vector<ClientUpdate> sent,
                                 int round_index) = 0;
};

class DirectChannel final : public UpdateChannel {
 public:
  std::string name() const override { return "direct"; }
  ChannelOutput Transmit(std::vector<ClientUpdate> sent,
                         int round_index) override;
};

// Everything observable in one round, plus the pre-channel updates kept for
// evaluation only.
struct RoundTrace {
  int round_index = 0;
  nn::ModelParams global_before;
  std::vector<ClientUpdate> updates_received;
  std::vector<std::vector<int>> layer_origins;
  nn::ModelParams global_after;
  std::vector<ClientUpdate> per_client_sent;
};

// local_epochs passes of mini-batch training over the client's train split,
// starting from `global`. Batch order is shuffled from
// DeriveSeed(config.seed, round_index, client_id).
ClientUpdate LocalTrain(const data::ClientRecord& client,
                        const nn::ModelParams& global,
                        const nn::ModelSpec& spec, const RoundConfig& config,
                        int round_index);

// Unweighted per-scalar mean, accumulated in slot order.
nn::ModelParams Aggregate(std::span<const ClientUpdate> updates);

// Disseminate `global`, train every participant, pass the updates through
// `channel`, aggregate what arrives.
RoundTrace RunRound(const data::Population& pop, const nn::ModelParams& global,
                    const nn::ModelSpec& spec, const RoundConfig& config,
                    UpdateChannel& channel, int round_index);

struct EvaluationReport {
  std::vector<double> per_client;
  // Weighted by test-set size.
  double mean = 0.0;
};

// Test-split accuracy of `params` for the clients at `client_indices` (all
// clients when empty).
EvaluationReport Evaluate(const nn::ModelParams& params,
                          const nn::ModelSpec& spec,
                          const data::Population& pop,
                          std::span<const size_t> client_indices = {});

}  // namespace mixnn::fl

#endif  // MIXNN_FL_FEDERATED_H_
