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

#include "mixnn/fl/federated.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "mixnn/errors.h"
#include "mixnn/random.h"

namespace mixnn::fl {

void RoundConfig::Validate() const {
  if (num_rounds < 1) throw ConfigError("rounds.num_rounds must be >= 1");
  if (local_epochs < 1) throw ConfigError("rounds.local_epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("rounds.batch_size must be >= 1");
  if (participants_per_round < 0 || participants_per_round == 1) {
    throw ConfigError("rounds.participants_per_round must be 0 or >= 2");
  }
  optimizer.Validate();
}

size_t RoundConfig::Participants(size_t population_size) const {
  if (participants_per_round == 0) return population_size;
  const auto c = static_cast<size_t>(participants_per_round);
  if (c > population_size) {
    throw ConfigError("rounds.participants_per_round exceeds population size");
  }
  return c;
}

ChannelOutput DirectChannel::Transmit(std::vector<ClientUpdate> sent,
                                      int /*round_index*/) {
  ChannelOutput out;
  out.layer_origins.reserve(sent.size());
  for (const ClientUpdate& u : sent) {
    out.layer_origins.emplace_back(u.params.num_layers(),
                                   u.origin_id.value_or(-1));
  }
  out.updates = std::move(sent);
  return out;
}

ClientUpdate LocalTrain(const data::ClientRecord& client,
                        const nn::ModelParams& global,
                        const nn::ModelSpec& spec, const RoundConfig& config,
                        int round_index) {
  nn::CheckShape(global, spec);
  if (client.train.size() == 0) {
    throw ConfigError("client " + std::to_string(client.client_id) +
                      " has an empty training set");
  }
  Rng rng(StreamSeed(config.seed, Stream::kLocalShuffle,
                     {static_cast<uint64_t>(round_index),
                      static_cast<uint64_t>(client.client_id)}));
  nn::ModelParams params = global;
  nn::OptimizerState state = nn::OptimizerState::Init(config.optimizer, spec);
  std::vector<size_t> order(client.train.size());
  const auto batch = static_cast<size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.local_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      const nn::Batch mb = client.train.Select(
          std::span<const size_t>(order).subspan(start, end - start));
      const nn::LossAndGrad lg = nn::LossAndGradient(params, spec, mb);
      nn::OptimizerStep(params, lg.grad, state, config.optimizer);
    }
  }
  return {client.client_id, std::move(params)};
}

nn::ModelParams Aggregate(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw ConfigError("aggregate of zero updates");
  std::vector<const nn::ModelParams*> models;
  models.reserve(updates.size());
  for (const ClientUpdate& u : updates) {
    if (!u.params.SameShape(updates.front().params)) {
      throw DimensionError("aggregate: update shapes differ");
    }
    models.push_back(&u.params);
  }
  return nn::Mean(models);
}

RoundTrace RunRound(const data::Population& pop, const nn::ModelParams& global,
                    const nn::ModelSpec& spec, const RoundConfig& config,
                    UpdateChannel& channel, int round_index) {
  config.Validate();
  const size_t c = config.Participants(pop.size());
  if (c == 0) throw ConfigError("round with no participants");
  RoundTrace trace;
  trace.round_index = round_index;
  trace.global_before = global;
  trace.per_client_sent.reserve(c);
  for (size_t i = 0; i < c; ++i) {
    trace.per_client_sent.push_back(
        LocalTrain(pop.clients[i], global, spec, config, round_index));
  }
  ChannelOutput out = channel.Transmit(trace.per_client_sent, round_index);
  trace.updates_received = std::move(out.updates);
  trace.layer_origins = std::move(out.layer_origins);
  trace.global_after = Aggregate(trace.updates_received);
  return trace;
}

EvaluationReport Evaluate(const nn::ModelParams& params,
                          const nn::ModelSpec& spec,
                          const data::Population& pop,
                          std::span<const size_t> client_indices) {
  std::vector<size_t> all;
  if (client_indices.empty()) {
    all.resize(pop.size());
    std::iota(all.begin(), all.end(), size_t{0});
    client_indices = all;
  }
  EvaluationReport report;
  size_t correct_total = 0;
  size_t seen_total = 0;
  for (size_t idx : client_indices) {
    const nn::Batch& test = pop.clients.at(idx).test;
    if (test.size() == 0) {
      report.per_client.push_back(0.0);
      continue;
    }
    const std::vector<int> pred = nn::Predict(params, spec, test.inputs);
    size_t correct = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == test.labels[i] ? 1 : 0;
    }
    report.per_client.push_back(static_cast<double>(correct) /
                                static_cast<double>(pred.size()));
    correct_total += correct;
    seen_total += pred.size();
  }
  if (seen_total == 0) throw ConfigError("evaluation over empty test sets");
  report.mean =
      static_cast<double>(correct_total) / static_cast<double>(seen_total);
  return report;
}

}  // namespace mixnn::fl
