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

#ifndef MIXNN_MIXER_MIXER_H_
#define MIXNN_MIXER_MIXER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnn/fl/federated.h"
#include "mixnn/nn/model.h"
#include "mixnn/random.h"

namespace mixnn::mixer {

// Which received update fills each (output slot, layer) cell. Entries are
// 0-based positions in the received list.
class MixAssignment {
 public:
  MixAssignment() = default;
  MixAssignment(int num_slots, int num_layers);

  static MixAssignment Identity(int num_slots, int num_layers);

  int num_slots() const { return num_slots_; }
  int num_layers() const { return num_layers_; }
  int at(int slot, int layer) const;
  void set(int slot, int layer, int participant);

 private:
  int num_slots_ = 0;
  int num_layers_ = 0;
  std::vector<int> cells_;
};

// True iff every layer column is a permutation of {0, ..., num_slots - 1}.
bool VerifyAssignment(const MixAssignment& assignment);

struct MixedBatch {
  // Origin ids erased.
  std::vector<fl::ClientUpdate> updates;
  MixAssignment assignment;
};

// Draws an independent uniform permutation per layer and rebuilds C updates
// whose layer t comes from received update assignment.at(slot, t).
// Throws ConfigError for fewer than two updates, DimensionError on shape
// mismatch.
MixedBatch MixBatch(std::span<const fl::ClientUpdate> updates, Rng& rng);
MixedBatch MixBatch(std::span<const fl::ClientUpdate> updates, uint64_t seed);

// One layer's block from one participant. `origin` is bookkeeping for
// evaluation and never leaves the mixer attached to an update.
struct LayerUpdate {
  int layer_index = 0;
  nn::LayerBlock block;
  int origin = -1;
};

struct Emission {
  fl::ClientUpdate update;
  std::vector<int> layer_origins;
};

// Buffer-of-k proxy. Each received update is split into its layers, one
// list per layer. The first k updates fill the lists; every later update
// makes the proxy remove one uniformly chosen block from each list, emit
// them as a new update, and put the incoming layers in the freed positions.
// Feeds are serialized; one instance per proxy.
class StreamingMixer {
 public:
  StreamingMixer(int buffer_size, nn::ModelSpec spec, uint64_t seed);

  // Buffers while priming; afterwards emits exactly one mixed update.
  std::optional<Emission> Feed(const fl::ClientUpdate& update);

  // Emits everything still buffered, pairing layers by independent random
  // permutations, and empties the lists.
  std::vector<Emission> Flush();

  int buffer_size() const { return buffer_size_; }
  bool primed() const { return primed_; }
  // Blocks held in each per-layer list (all lists have the same length).
  size_t buffered() const;
  const std::vector<std::vector<LayerUpdate>>& lists() const { return lists_; }
  // Per-layer list operations performed so far; each post-priming feed adds
  // the same amount regardless of update contents.
  uint64_t operation_count() const { return operations_; }

 private:
  int buffer_size_;
  nn::ModelSpec spec_;
  Rng rng_;
  std::vector<std::vector<LayerUpdate>> lists_;
  bool primed_ = false;
  uint64_t operations_ = 0;
};

// Batch-mode proxy behind the fl update-channel interface. Draws fresh
// permutations every round from StreamSeed(seed, kMixer, {round}).
class MixerBatchChannel final : public fl::UpdateChannel {
 public:
  explicit MixerBatchChannel(uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "mixer-batch"; }
  fl::ChannelOutput Transmit(std::vector<fl::ClientUpdate> sent,
                             int round_index) override;

 private:
  uint64_t seed_;
};

// Streaming proxy behind the fl update-channel interface: feeds every update
// of the round, then flushes so all C updates reach the server.
class MixerStreamingChannel final : public fl::UpdateChannel {
 public:
  MixerStreamingChannel(int buffer_size, nn::ModelSpec spec, uint64_t seed);
  std::string name() const override { return "mixer-streaming"; }
  fl::ChannelOutput Transmit(std::vector<fl::ClientUpdate> sent,
                             int round_index) override;

 private:
  StreamingMixer mixer_;
};

}  // namespace mixnn::mixer

#endif  // MIXNN_MIXER_MIXER_H_
