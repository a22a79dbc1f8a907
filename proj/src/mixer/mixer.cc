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

#include "mixnn/mixer/mixer.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "mixnn/errors.h"

namespace mixnn::mixer {
namespace {

void CheckUniformShapes(std::span<const fl::ClientUpdate> updates) {
  for (const fl::ClientUpdate& u : updates) {
    if (!u.params.SameShape(updates.front().params)) {
      throw DimensionError("mixer: update shapes differ");
    }
  }
}

}  // namespace

MixAssignment::MixAssignment(int num_slots, int num_layers)
    : num_slots_(num_slots),
      num_layers_(num_layers),
      cells_(static_cast<size_t>(num_slots) * num_layers, 0) {}

MixAssignment MixAssignment::Identity(int num_slots, int num_layers) {
  MixAssignment m(num_slots, num_layers);
  for (int i = 0; i < num_slots; ++i) {
    for (int t = 0; t < num_layers; ++t) m.set(i, t, i);
  }
  return m;
}

int MixAssignment::at(int slot, int layer) const {
  return cells_.at(static_cast<size_t>(slot) * num_layers_ + layer);
}

void MixAssignment::set(int slot, int layer, int participant) {
  cells_.at(static_cast<size_t>(slot) * num_layers_ + layer) = participant;
}

bool VerifyAssignment(const MixAssignment& assignment) {
  const int c = assignment.num_slots();
  std::vector<bool> seen(static_cast<size_t>(c));
  for (int t = 0; t < assignment.num_layers(); ++t) {
    std::fill(seen.begin(), seen.end(), false);
    for (int i = 0; i < c; ++i) {
      const int p = assignment.at(i, t);
      if (p < 0 || p >= c || seen[p]) return false;
      seen[p] = true;
    }
  }
  return true;
}

MixedBatch MixBatch(std::span<const fl::ClientUpdate> updates, Rng& rng) {
  if (updates.size() < 2) {
    throw ConfigError("mixing needs at least two updates");
  }
  CheckUniformShapes(updates);
  const int c = static_cast<int>(updates.size());
  const int n = static_cast<int>(updates.front().params.num_layers());

  MixedBatch out;
  out.assignment = MixAssignment(c, n);
  std::vector<int> perm(static_cast<size_t>(c));
  for (int t = 0; t < n; ++t) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < c; ++i) out.assignment.set(i, t, perm[i]);
  }
  out.updates.resize(static_cast<size_t>(c));
  for (int i = 0; i < c; ++i) {
    nn::ModelParams& p = out.updates[i].params;
    p.blocks.reserve(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
      p.blocks.push_back(updates[out.assignment.at(i, t)].params.blocks[t]);
    }
  }
  return out;
}

MixedBatch MixBatch(std::span<const fl::ClientUpdate> updates, uint64_t seed) {
  Rng rng(seed);
  return MixBatch(updates, rng);
}

StreamingMixer::StreamingMixer(int buffer_size, nn::ModelSpec spec,
                               uint64_t seed)
    : buffer_size_(buffer_size), spec_(std::move(spec)), rng_(seed) {
  if (buffer_size_ < 2) throw ConfigError("mixer buffer size k must be >= 2");
  spec_.Validate();
  lists_.resize(spec_.num_layers());
  for (auto& list : lists_) list.reserve(static_cast<size_t>(buffer_size_));
}

size_t StreamingMixer::buffered() const {
  return lists_.empty() ? 0 : lists_.front().size();
}

std::optional<Emission> StreamingMixer::Feed(const fl::ClientUpdate& update) {
  nn::CheckShape(update.params, spec_);
  const int origin = update.origin_id.value_or(-1);
  const size_t n = lists_.size();

  if (!primed_) {
    for (size_t t = 0; t < n; ++t) {
      lists_[t].push_back(
          {static_cast<int>(t), update.params.blocks[t], origin});
      ++operations_;
    }
    primed_ = buffered() == static_cast<size_t>(buffer_size_);
    return std::nullopt;
  }

  Emission out;
  out.update.params.blocks.reserve(n);
  out.layer_origins.reserve(n);
  std::uniform_int_distribution<size_t> pick(0, lists_.front().size() - 1);
  for (size_t t = 0; t < n; ++t) {
    LayerUpdate& slot = lists_[t][pick(rng_)];
    out.update.params.blocks.push_back(std::move(slot.block));
    out.layer_origins.push_back(slot.origin);
    slot.block = update.params.blocks[t];
    slot.origin = origin;
    ++operations_;
  }
  return out;
}

std::vector<Emission> StreamingMixer::Flush() {
  const size_t residue = buffered();
  std::vector<Emission> out(residue);
  std::vector<size_t> perm(residue);
  for (size_t t = 0; t < lists_.size(); ++t) {
    std::iota(perm.begin(), perm.end(), size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng_);
    for (size_t i = 0; i < residue; ++i) {
      LayerUpdate& src = lists_[t][perm[i]];
      out[i].update.params.blocks.push_back(std::move(src.block));
      out[i].layer_origins.push_back(src.origin);
      ++operations_;
    }
    lists_[t].clear();
  }
  primed_ = false;
  return out;
}

fl::ChannelOutput MixerBatchChannel::Transmit(
    std::vector<fl::ClientUpdate> sent, int round_index) {
  MixedBatch mixed = MixBatch(
      sent, StreamSeed(seed_, Stream::kMixer,
                       {static_cast<uint64_t>(round_index)}));
  fl::ChannelOutput out;
  for (int i = 0; i < mixed.assignment.num_slots(); ++i) {
    std::vector<int> origins;
    for (int t = 0; t < mixed.assignment.num_layers(); ++t) {
      origins.push_back(
          sent[mixed.assignment.at(i, t)].origin_id.value_or(-1));
    }
    out.layer_origins.push_back(std::move(origins));
  }
  out.updates = std::move(mixed.updates);
  return out;
}

MixerStreamingChannel::MixerStreamingChannel(int buffer_size,
                                             nn::ModelSpec spec, uint64_t seed)
    : mixer_(buffer_size, std::move(spec),
             StreamSeed(seed, Stream::kMixer, {~uint64_t{0}})) {}

fl::ChannelOutput MixerStreamingChannel::Transmit(
    std::vector<fl::ClientUpdate> sent, int /*round_index*/) {
  fl::ChannelOutput out;
  auto take = [&out](Emission e) {
    out.updates.push_back(std::move(e.update));
    out.layer_origins.push_back(std::move(e.layer_origins));
  };
  for (const fl::ClientUpdate& u : sent) {
    if (auto e = mixer_.Feed(u)) take(std::move(*e));
  }
  for (Emission& e : mixer_.Flush()) take(std::move(e));
  return out;
}

}  // namespace mixnn::mixer
