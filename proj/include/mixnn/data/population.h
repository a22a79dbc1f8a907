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

#ifndef MIXNN_DATA_POPULATION_H_
#define MIXNN_DATA_POPULATION_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "mixnn/nn/model.h"

namespace mixnn::data {

// How a participant's sensitive attribute shifts its features. skew = 0
// leaves the data independent of the attribute.
struct AttributeSpec {
  int num_attribute_classes = 2;
  double skew = 1.0;

  void Validate() const;
};

struct ClientRecord {
  int client_id = 0;
  int attribute = 0;
  nn::Batch train;
  nn::Batch test;
};

struct Population {
  std::vector<ClientRecord> clients;
  int num_main_classes = 2;
  int num_attribute_classes = 2;
  int feature_dim = 1;

  size_t size() const { return clients.size(); }
  // Number of clients holding each attribute class.
  std::vector<int> AttributeCounts() const;
  // Copy restricted to the clients at `indices`, in that order.
  Population Subset(const std::vector<size_t>& indices) const;
};

struct PopulationConfig {
  // Seeds the samples and attribute assignment.
  uint64_t seed = 1;
  // Seeds the class means and attribute offsets; populations meant to be
  // drawn from the same distribution share it.
  uint64_t geometry_seed = 1;
  int num_clients = 20;
  // Train + test samples per client.
  int samples_per_client = 120;
  int feature_dim = 32;
  int num_main_classes = 4;
  AttributeSpec attribute;
  // Fraction of clients per attribute class; empty means uniform.
  std::vector<double> attribute_balance;
  double test_fraction = 0.2;
  // Norm of each main-class mean.
  double class_separation = 2.0;
  // Norm of the per-attribute offset applied at skew = 1.
  double attribute_offset_scale = 2.0;
  // Optional preference-skewed labels: a fraction `label_skew_fraction` of a
  // client's samples come from the classes c with c % num_attribute_classes
  // equal to its attribute.
  bool label_skew = false;
  double label_skew_fraction = 0.8;

  void Validate() const;
};

// The fixed geometry behind a population: class means and attribute
// offsets. Exposed so tests can build Bayes-optimal oracles.
struct Geometry {
  std::vector<Eigen::VectorXd> class_means;
  // Orthonormal directions scaled by attribute_offset_scale.
  std::vector<Eigen::VectorXd> attribute_offsets;
};

Geometry MakeGeometry(const PopulationConfig& config);

// Features of a (class c, attribute a) sample are drawn from
// N(class_means[c] + skew * attribute_offsets[a], I).
Population GeneratePopulation(const PopulationConfig& config);

struct AuxiliarySplit {
  Population attack_aux;
  Population held_out;
};

// Keeps floor(ratio * n_a) clients of each attribute class a (at least one)
// as auxiliary knowledge; the rest go to held_out. Throws ConfigError when a
// class present in `pop` would get no auxiliary client.
AuxiliarySplit SplitAuxiliary(const Population& pop, double ratio,
                              uint64_t seed);

// Versioned binary population file ("MXNNPOP1").
void WritePopulation(std::ostream& out, const Population& pop);
Population ReadPopulation(std::istream& in);
void SavePopulation(const std::filesystem::path& path, const Population& pop);
Population LoadPopulation(const std::filesystem::path& path);

bool operator==(const Population& a, const Population& b);

}  // namespace mixnn::data

#endif  // MIXNN_DATA_POPULATION_H_
