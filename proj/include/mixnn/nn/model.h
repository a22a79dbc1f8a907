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

#ifndef MIXNN_NN_MODEL_H_
#define MIXNN_NN_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mixnn::nn {

enum class Activation { kRelu, kSoftmax, kIdentity };

std::string ActivationName(Activation activation);
Activation ParseActivation(const std::string& name);

struct LayerSpec {
  int input_width = 1;
  int output_width = 1;
  Activation activation = Activation::kIdentity;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Architecture of a dense feed-forward network. Layer t consumes the output
// of layer t-1; softmax may only appear on the final layer.
struct ModelSpec {
  std::vector<LayerSpec> layers;

  size_t num_layers() const { return layers.size(); }
  int input_width() const;
  int output_width() const;
  size_t ParameterCount() const;

  // Throws ConfigError on zero widths, misplaced softmax, or incompatible
  // consecutive widths.
  void Validate() const;

  // relu hidden layers followed by a softmax classifier.
  static ModelSpec Dense(int input_width, const std::vector<int>& hidden,
                         int num_classes);

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// One layer's parameters: weights are output_width x input_width.
struct LayerBlock {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  size_t size() const {
    return static_cast<size_t>(weights.size() + bias.size());
  }
  bool SameShape(const LayerBlock& other) const {
    return weights.rows() == other.weights.rows() &&
           weights.cols() == other.weights.cols() &&
           bias.size() == other.bias.size();
  }
  friend bool operator==(const LayerBlock& a, const LayerBlock& b) {
    return a.SameShape(b) && a.weights == b.weights && a.bias == b.bias;
  }
};

// The full weight set of a network, one block per layer.
struct ModelParams {
  std::vector<LayerBlock> blocks;

  size_t num_layers() const { return blocks.size(); }
  size_t ParameterCount() const;
  bool SameShape(const ModelParams& other) const;
  bool AllFinite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Labelled samples, one row of `inputs` per sample.
struct Batch {
  Eigen::MatrixXd inputs;
  std::vector<int> labels;
  int num_classes = 2;

  size_t size() const { return labels.size(); }
  void Validate() const;
  // Rows selected by `indices`, in that order.
  Batch Select(std::span<const size_t> indices) const;
};

// Throws DimensionError naming the first layer whose block does not match.
void CheckShape(const ModelParams& params, const ModelSpec& spec);

ModelParams Zeros(const ModelSpec& spec);

// Glorot-uniform weights, zero biases.
ModelParams InitParams(const ModelSpec& spec, uint64_t seed);

// Class probabilities (or final-layer activations) for each input row.
Eigen::MatrixXd Forward(const ModelParams& params, const ModelSpec& spec,
                        const Eigen::MatrixXd& inputs);

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

// Mean cross-entropy (log clamped at kLogClamp) and its gradient. Requires a
// softmax final layer.
LossAndGrad LossAndGradient(const ModelParams& params, const ModelSpec& spec,
                            const Batch& batch);

inline constexpr double kLogClamp = 1e-12;

// Row-wise argmax of Forward.
std::vector<int> Predict(const ModelParams& params, const ModelSpec& spec,
                         const Eigen::MatrixXd& inputs);

// Layer 1 weights (row-major), layer 1 bias, layer 2 weights, ...
std::vector<double> Flatten(const ModelParams& params);
ModelParams Unflatten(std::span<const double> values, const ModelSpec& spec);

// Elementwise arithmetic; operands must share a shape.
ModelParams Subtract(const ModelParams& a, const ModelParams& b);
ModelParams Add(const ModelParams& a, const ModelParams& b);
ModelParams Scale(const ModelParams& a, double factor);
// a += factor * b
void AddScaledInPlace(ModelParams& a, const ModelParams& b, double factor);

// Arithmetic mean, accumulated in the order given.
ModelParams Mean(std::span<const ModelParams* const> models);

}  // namespace mixnn::nn

#endif  // MIXNN_NN_MODEL_H_
