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

#include "mixnn/data/population.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "mixnn/binary_io.h"
#include "mixnn/errors.h"
#include "mixnn/random.h"

namespace mixnn::data {
namespace {

constexpr char kMagic[] = "MXNNPOP1";
constexpr uint32_t kVersion = 1;

Eigen::VectorXd GaussianVector(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

// Per-class client counts from fractions; remainders go to the largest
// fractional parts, ties to the lowest class.
std::vector<int> ClientsPerAttribute(const PopulationConfig& config) {
  const int n_attr = config.attribute.num_attribute_classes;
  std::vector<double> balance = config.attribute_balance;
  if (balance.empty()) balance.assign(n_attr, 1.0 / n_attr);
  std::vector<int> counts(n_attr);
  std::vector<double> remainder(n_attr);
  int assigned = 0;
  for (int a = 0; a < n_attr; ++a) {
    const double exact = balance[a] * config.num_clients;
    counts[a] = static_cast<int>(std::floor(exact + 1e-9));
    remainder[a] = exact - counts[a];
    assigned += counts[a];
  }
  std::vector<int> order(n_attr);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return remainder[x] > remainder[y]; });
  for (int i = 0; assigned < config.num_clients; ++i, ++assigned) {
    ++counts[order[i % n_attr]];
  }
  for (int a = 0; a < n_attr; ++a) {
    if (counts[a] < 2) {
      throw ConfigError("attribute_balance: class " + std::to_string(a) +
                        " gets " + std::to_string(counts[a]) +
                        " clients, at least 2 are required");
    }
  }
  return counts;
}

std::vector<int> DrawLabels(int n, int attribute, const PopulationConfig& c,
                            Rng& rng) {
  const int k = c.num_main_classes;
  std::vector<int> labels(n);
  if (!c.label_skew) {
    for (int i = 0; i < n; ++i) labels[i] = i % k;
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
  }
  std::vector<int> preferred, other;
  for (int cls = 0; cls < k; ++cls) {
    (cls % c.attribute.num_attribute_classes == attribute ? preferred : other)
        .push_back(cls);
  }
  if (other.empty()) other = preferred;
  std::bernoulli_distribution pick_preferred(c.label_skew_fraction);
  for (int i = 0; i < n; ++i) {
    const std::vector<int>& pool = pick_preferred(rng) ? preferred : other;
    std::uniform_int_distribution<size_t> idx(0, pool.size() - 1);
    labels[i] = pool[idx(rng)];
  }
  return labels;
}

nn::Batch DrawBatch(int n, int attribute, const Geometry& geometry,
                    const PopulationConfig& c, Rng& rng) {
  nn::Batch batch;
  batch.num_classes = c.num_main_classes;
  batch.labels = DrawLabels(n, attribute, c, rng);
  batch.inputs.resize(n, c.feature_dim);
  const Eigen::VectorXd shift =
      c.attribute.skew * geometry.attribute_offsets[attribute];
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd mean = geometry.class_means[batch.labels[i]] + shift;
    for (int d = 0; d < c.feature_dim; ++d) {
      batch.inputs(i, d) = mean(d) + normal(rng);
    }
  }
  return batch;
}

void WriteBatch(std::ostream& out, const nn::Batch& b) {
  io::WritePod<uint32_t>(out, static_cast<uint32_t>(b.size()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rows = b.inputs;
  io::WriteDoubles(out, rows.data(), static_cast<size_t>(rows.size()));
  for (int y : b.labels) io::WritePod<int32_t>(out, y);
}

nn::Batch ReadBatch(std::istream& in, int feature_dim, int num_classes) {
  nn::Batch b;
  b.num_classes = num_classes;
  const auto n = io::ReadPod<uint32_t>(in);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
      n, feature_dim);
  io::ReadDoubles(in, rows.data(), static_cast<size_t>(rows.size()));
  b.inputs = rows;
  b.labels.resize(n);
  for (uint32_t i = 0; i < n; ++i) b.labels[i] = io::ReadPod<int32_t>(in);
  return b;
}

bool SameBatch(const nn::Batch& a, const nn::Batch& b) {
  return a.num_classes == b.num_classes && a.labels == b.labels &&
         a.inputs.rows() == b.inputs.rows() &&
         a.inputs.cols() == b.inputs.cols() && a.inputs == b.inputs;
}

}  // namespace

void AttributeSpec::Validate() const {
  if (num_attribute_classes < 2) {
    throw ConfigError("attribute.num_attribute_classes must be >= 2");
  }
  if (!(skew >= 0.0 && skew <= 1.0)) {
    throw ConfigError("attribute.skew must lie in [0, 1]");
  }
}

void PopulationConfig::Validate() const {
  attribute.Validate();
  const int n_attr = attribute.num_attribute_classes;
  if (feature_dim < n_attr) {
    throw ConfigError("feature_dim must be >= num_attribute_classes");
  }
  if (num_main_classes < 2) {
    throw ConfigError("num_main_classes must be >= 2");
  }
  if (num_clients < 2 * n_attr) {
    throw ConfigError("num_clients must be >= 2 * num_attribute_classes");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in (0, 1)");
  }
  if (samples_per_client < 2 * num_main_classes) {
    throw ConfigError("samples_per_client must be >= 2 * num_main_classes");
  }
  if (!attribute_balance.empty()) {
    if (static_cast<int>(attribute_balance.size()) != n_attr) {
      throw ConfigError("attribute_balance needs one fraction per class");
    }
    double sum = 0.0;
    for (double f : attribute_balance) {
      if (!(f >= 0.0)) throw ConfigError("attribute_balance must be >= 0");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("attribute_balance must sum to 1");
    }
  }
  if (!(label_skew_fraction >= 0.0 && label_skew_fraction <= 1.0)) {
    throw ConfigError("label_skew_fraction must lie in [0, 1]");
  }
  if (!(class_separation >= 0.0) || !(attribute_offset_scale >= 0.0)) {
    throw ConfigError("class_separation/attribute_offset_scale must be >= 0");
  }
}

std::vector<int> Population::AttributeCounts() const {
  std::vector<int> counts(num_attribute_classes, 0);
  for (const ClientRecord& c : clients) ++counts.at(c.attribute);
  return counts;
}

Population Population::Subset(const std::vector<size_t>& indices) const {
  Population out;
  out.num_main_classes = num_main_classes;
  out.num_attribute_classes = num_attribute_classes;
  out.feature_dim = feature_dim;
  out.clients.reserve(indices.size());
  for (size_t i : indices) out.clients.push_back(clients.at(i));
  return out;
}

Geometry MakeGeometry(const PopulationConfig& config) {
  config.Validate();
  Rng rng(StreamSeed(config.geometry_seed, Stream::kPopulation, {0}));
  Geometry g;
  for (int c = 0; c < config.num_main_classes; ++c) {
    Eigen::VectorXd v = GaussianVector(config.feature_dim, rng);
    g.class_means.push_back(v.normalized() * config.class_separation);
  }
  // Gram-Schmidt keeps the attribute offsets mutually orthogonal.
  std::vector<Eigen::VectorXd> basis;
  while (static_cast<int>(basis.size()) <
         config.attribute.num_attribute_classes) {
    Eigen::VectorXd v = GaussianVector(config.feature_dim, rng);
    for (const Eigen::VectorXd& b : basis) v -= v.dot(b) * b;
    if (v.norm() < 1e-6) continue;
    basis.push_back(v.normalized());
  }
  for (const Eigen::VectorXd& b : basis) {
    g.attribute_offsets.push_back(b * config.attribute_offset_scale);
  }
  return g;
}

Population GeneratePopulation(const PopulationConfig& config) {
  config.Validate();
  const Geometry geometry = MakeGeometry(config);
  const std::vector<int> counts = ClientsPerAttribute(config);

  Rng assign_rng(StreamSeed(config.seed, Stream::kPopulation, {0}));
  std::vector<int> attributes;
  for (size_t a = 0; a < counts.size(); ++a) {
    attributes.insert(attributes.end(), counts[a], static_cast<int>(a));
  }
  std::shuffle(attributes.begin(), attributes.end(), assign_rng);

  const int k = config.num_main_classes;
  const int n_test = std::max(
      k, static_cast<int>(std::lround(config.samples_per_client *
                                      config.test_fraction)));
  const int n_train = config.samples_per_client - n_test;
  if (n_train < 1) throw ConfigError("samples_per_client too small");

  Population pop;
  pop.num_main_classes = k;
  pop.num_attribute_classes = config.attribute.num_attribute_classes;
  pop.feature_dim = config.feature_dim;
  pop.clients.reserve(config.num_clients);
  for (int id = 0; id < config.num_clients; ++id) {
    Rng rng(StreamSeed(config.seed, Stream::kPopulation,
                       {static_cast<uint64_t>(id) + 1}));
    ClientRecord client;
    client.client_id = id;
    client.attribute = attributes[id];
    client.train = DrawBatch(n_train, client.attribute, geometry, config, rng);
    client.test = DrawBatch(n_test, client.attribute, geometry, config, rng);
    pop.clients.push_back(std::move(client));
  }
  return pop;
}

AuxiliarySplit SplitAuxiliary(const Population& pop, double ratio,
                              uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ConfigError("aux_ratio must lie in (0, 1]");
  }
  Rng rng(StreamSeed(seed, Stream::kAuxSplit));
  std::vector<bool> chosen(pop.size(), false);
  for (int a = 0; a < pop.num_attribute_classes; ++a) {
    std::vector<size_t> members;
    for (size_t i = 0; i < pop.size(); ++i) {
      if (pop.clients[i].attribute == a) members.push_back(i);
    }
    if (members.empty()) continue;
    const auto keep = static_cast<size_t>(
        std::floor(ratio * static_cast<double>(members.size()) + 1e-9));
    if (keep == 0) {
      throw ConfigError("aux_ratio " + std::to_string(ratio) +
                        " leaves attribute class " + std::to_string(a) +
                        " without auxiliary clients");
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t i = 0; i < keep; ++i) chosen[members[i]] = true;
  }
  std::vector<size_t> aux_idx, held_idx;
  for (size_t i = 0; i < pop.size(); ++i) {
    (chosen[i] ? aux_idx : held_idx).push_back(i);
  }
  return {pop.Subset(aux_idx), pop.Subset(held_idx)};
}

void WritePopulation(std::ostream& out, const Population& pop) {
  io::WriteMagic(out, kMagic);
  io::WritePod<uint32_t>(out, kVersion);
  io::WritePod<uint32_t>(out, static_cast<uint32_t>(pop.num_main_classes));
  io::WritePod<uint32_t>(out,
                         static_cast<uint32_t>(pop.num_attribute_classes));
  io::WritePod<uint32_t>(out, static_cast<uint32_t>(pop.feature_dim));
  io::WritePod<uint32_t>(out, static_cast<uint32_t>(pop.size()));
  for (const ClientRecord& c : pop.clients) {
    io::WritePod<int32_t>(out, c.client_id);
    io::WritePod<int32_t>(out, c.attribute);
    WriteBatch(out, c.train);
    WriteBatch(out, c.test);
  }
  if (!out) throw ConfigError("failed to write population");
}

Population ReadPopulation(std::istream& in) {
  io::ExpectMagic(in, kMagic);
  const auto version = io::ReadPod<uint32_t>(in);
  if (version != kVersion) {
    throw ConfigError("unsupported population format version " +
                      std::to_string(version));
  }
  Population pop;
  pop.num_main_classes = static_cast<int>(io::ReadPod<uint32_t>(in));
  pop.num_attribute_classes = static_cast<int>(io::ReadPod<uint32_t>(in));
  pop.feature_dim = static_cast<int>(io::ReadPod<uint32_t>(in));
  const auto n = io::ReadPod<uint32_t>(in);
  for (uint32_t i = 0; i < n; ++i) {
    ClientRecord c;
    c.client_id = io::ReadPod<int32_t>(in);
    c.attribute = io::ReadPod<int32_t>(in);
    if (c.attribute < 0 || c.attribute >= pop.num_attribute_classes) {
      throw ConfigError("corrupt population: attribute out of range");
    }
    c.train = ReadBatch(in, pop.feature_dim, pop.num_main_classes);
    c.test = ReadBatch(in, pop.feature_dim, pop.num_main_classes);
    pop.clients.push_back(std::move(c));
  }
  return pop;
}

void SavePopulation(const std::filesystem::path& path, const Population& pop) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  WritePopulation(out, pop);
}

Population LoadPopulation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return ReadPopulation(in);
}

bool operator==(const Population& a, const Population& b) {
  if (a.num_main_classes != b.num_main_classes ||
      a.num_attribute_classes != b.num_attribute_classes ||
      a.feature_dim != b.feature_dim || a.size() != b.size()) {
    return false;
  }
  for (size_t i = 0; i < a.size(); ++i) {
    const ClientRecord& x = a.clients[i];
    const ClientRecord& y = b.clients[i];
    if (x.client_id != y.client_id || x.attribute != y.attribute ||
        !SameBatch(x.train, y.train) || !SameBatch(x.test, y.test)) {
      return false;
    }
  }
  return true;
}

}  // namespace mixnn::data
