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

#ifndef MIXNN_RANDOM_H_
#define MIXNN_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mixnn {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a tuple of
// coordinates, e.g. DeriveSeed(seed, {round, client_id}).
constexpr uint64_t DeriveSeed(uint64_t seed,
                              std::initializer_list<uint64_t> coords) {
  uint64_t h = Mix64(seed);
  for (uint64_t c : coords) h = Mix64(h ^ Mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

// Stream tags keep derived seeds of different subsystems apart.
enum class Stream : uint64_t {
  kInit = 1,
  kPopulation = 2,
  kBackground = 3,
  kAuxSplit = 4,
  kLocalShuffle = 5,
  kMixer = 6,
  kNoise = 7,
  kReference = 8,
  kFolds = 9,
  kRepetition = 10,
};

constexpr uint64_t StreamSeed(uint64_t seed, Stream stream,
                              std::initializer_list<uint64_t> coords = {}) {
  uint64_t h = DeriveSeed(seed, {static_cast<uint64_t>(stream)});
  for (uint64_t c : coords) h = Mix64(h ^ Mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace mixnn

#endif  // MIXNN_RANDOM_H_
