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

#include "mixnn/nn/model.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mixnn/errors.h"
#include "mixnn/random.h"

namespace mixnn::nn {
namespace {

void CheckSameShape(const ModelParams& a, const ModelParams& b,
                    const char* op) {
  if (!a.SameShape(b)) {
    throw DimensionError(std::string(op) + ": operand shapes differ");
  }
}

Eigen::MatrixXd Affine(const LayerBlock& block, const Eigen::MatrixXd& in) {
  Eigen::MatrixXd z = in * block.weights.transpose();
  z.rowwise() += block.bias.transpose();
  return z;
}

void SoftmaxRowsInPlace(Eigen::MatrixXd& z) {
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double max = z.row(r).maxCoeff();
    z.row(r) = (z.row(r).array() - max).exp();
    z.row(r) /= z.row(r).sum();
  }
}

void ActivateInPlace(Activation activation, Eigen::MatrixXd& z) {
  switch (activation) {
    case Activation::kRelu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::kSoftmax:
      SoftmaxRowsInPlace(z);
      break;
    case Activation::kIdentity:
      break;
  }
}

void CheckInputs(const ModelSpec& spec, const Eigen::MatrixXd& inputs) {
  if (spec.layers.empty()) return;
  if (inputs.cols() != spec.layers.front().input_width) {
    throw DimensionError("layer 1: input width " +
                         std::to_string(inputs.cols()) + " != expected " +
                         std::to_string(spec.layers.front().input_width));
  }
}

}  // namespace

std::string ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSoftmax:
      return "softmax";
    case Activation::kIdentity:
      return "identity";
  }
  return "identity";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "softmax") return Activation::kSoftmax;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("unknown activation '" + name + "'");
}

int ModelSpec::input_width() const {
  return layers.empty() ? 0 : layers.front().input_width;
}

int ModelSpec::output_width() const {
  return layers.empty() ? 0 : layers.back().output_width;
}

size_t ModelSpec::ParameterCount() const {
  size_t n = 0;
  for (const LayerSpec& l : layers) {
    n += static_cast<size_t>(l.output_width) * (l.input_width + 1);
  }
  return n;
}

void ModelSpec::Validate() const {
  for (size_t t = 0; t < layers.size(); ++t) {
    const LayerSpec& l = layers[t];
    const std::string where = "layer " + std::to_string(t + 1);
    if (l.input_width < 1 || l.output_width < 1) {
      throw ConfigError(where + ": widths must be >= 1");
    }
    if (l.activation == Activation::kSoftmax && t + 1 != layers.size()) {
      throw ConfigError(where + ": softmax is only allowed on the last layer");
    }
    if (t > 0 && l.input_width != layers[t - 1].output_width) {
      throw ConfigError(where + ": input width " +
                        std::to_string(l.input_width) +
                        " does not match previous output width " +
                        std::to_string(layers[t - 1].output_width));
    }
  }
}

ModelSpec ModelSpec::Dense(int input_width, const std::vector<int>& hidden,
                           int num_classes) {
  ModelSpec spec;
  int prev = input_width;
  for (int w : hidden) {
    spec.layers.push_back({prev, w, Activation::kRelu});
    prev = w;
  }
  spec.layers.push_back({prev, num_classes, Activation::kSoftmax});
  spec.Validate();
  return spec;
}

size_t ModelParams::ParameterCount() const {
  size_t n = 0;
  for (const LayerBlock& b : blocks) n += b.size();
  return n;
}

bool ModelParams::SameShape(const ModelParams& other) const {
  if (blocks.size() != other.blocks.size()) return false;
  for (size_t t = 0; t < blocks.size(); ++t) {
    if (!blocks[t].SameShape(other.blocks[t])) return false;
  }
  return true;
}

bool ModelParams::AllFinite() const {
  for (const LayerBlock& b : blocks) {
    if (!b.weights.allFinite() || !b.bias.allFinite()) return false;
  }
  return true;
}

void Batch::Validate() const {
  if (labels.empty()) throw ConfigError("batch is empty");
  if (static_cast<size_t>(inputs.rows()) != labels.size()) {
    throw DimensionError("batch has " + std::to_string(inputs.rows()) +
                         " input rows but " + std::to_string(labels.size()) +
                         " labels");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw ConfigError("label " + std::to_string(y) + " outside [0, " +
                        std::to_string(num_classes) + ")");
    }
  }
}

Batch Batch::Select(std::span<const size_t> indices) const {
  Batch out;
  out.num_classes = num_classes;
  out.inputs.resize(static_cast<Eigen::Index>(indices.size()), inputs.cols());
  out.labels.reserve(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    out.inputs.row(static_cast<Eigen::Index>(i)) =
        inputs.row(static_cast<Eigen::Index>(indices[i]));
    out.labels.push_back(labels[indices[i]]);
  }
  return out;
}

void CheckShape(const ModelParams& params, const ModelSpec& spec) {
  if (params.blocks.size() != spec.layers.size()) {
    throw DimensionError("model has " + std::to_string(params.blocks.size()) +
                         " blocks but spec has " +
                         std::to_string(spec.layers.size()) + " layers");
  }
  for (size_t t = 0; t < spec.layers.size(); ++t) {
    const LayerSpec& l = spec.layers[t];
    const LayerBlock& b = params.blocks[t];
    if (b.weights.rows() != l.output_width ||
        b.weights.cols() != l.input_width || b.bias.size() != l.output_width) {
      throw DimensionError("layer " + std::to_string(t + 1) +
                           ": block shape does not match spec");
    }
  }
}

ModelParams Zeros(const ModelSpec& spec) {
  ModelParams p;
  p.blocks.reserve(spec.layers.size());
  for (const LayerSpec& l : spec.layers) {
    p.blocks.push_back({Eigen::MatrixXd::Zero(l.output_width, l.input_width),
                        Eigen::VectorXd::Zero(l.output_width)});
  }
  return p;
}

ModelParams InitParams(const ModelSpec& spec, uint64_t seed) {
  spec.Validate();
  Rng rng(seed);
  ModelParams p = Zeros(spec);
  for (size_t t = 0; t < spec.layers.size(); ++t) {
    const LayerSpec& l = spec.layers[t];
    const double limit = std::sqrt(6.0 / (l.input_width + l.output_width));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::MatrixXd& w = p.blocks[t].weights;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
  }
  return p;
}

Eigen::MatrixXd Forward(const ModelParams& params, const ModelSpec& spec,
                        const Eigen::MatrixXd& inputs) {
  CheckShape(params, spec);
  CheckInputs(spec, inputs);
  Eigen::MatrixXd a = inputs;
  for (size_t t = 0; t < spec.layers.size(); ++t) {
    Eigen::MatrixXd z = Affine(params.blocks[t], a);
    ActivateInPlace(spec.layers[t].activation, z);
    a = std::move(z);
  }
  return a;
}

LossAndGrad LossAndGradient(const ModelParams& params, const ModelSpec& spec,
                            const Batch& batch) {
  CheckShape(params, spec);
  batch.Validate();
  CheckInputs(spec, batch.inputs);
  if (spec.layers.empty() ||
      spec.layers.back().activation != Activation::kSoftmax) {
    throw ConfigError("cross-entropy loss requires a softmax output layer");
  }
  if (spec.output_width() != batch.num_classes) {
    throw DimensionError("output width " +
                         std::to_string(spec.output_width()) +
                         " != number of classes " +
                         std::to_string(batch.num_classes));
  }

  const size_t n_layers = spec.layers.size();
  // activations[0] is the input; activations[t + 1] is the output of layer t.
  std::vector<Eigen::MatrixXd> activations;
  activations.reserve(n_layers + 1);
  activations.push_back(batch.inputs);
  for (size_t t = 0; t < n_layers; ++t) {
    Eigen::MatrixXd z = Affine(params.blocks[t], activations.back());
    ActivateInPlace(spec.layers[t].activation, z);
    activations.push_back(std::move(z));
  }

  const Eigen::MatrixXd& probs = activations.back();
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;
  Eigen::MatrixXd delta = probs;
  for (size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const int y = batch.labels[i];
    loss -= std::log(std::max(probs(row, y), kLogClamp));
    delta(row, y) -= 1.0;
  }
  loss /= n;
  delta /= n;
  if (!std::isfinite(loss) || !delta.allFinite()) {
    throw NumericError("non-finite loss or output probabilities");
  }

  LossAndGrad out;
  out.loss = loss;
  out.grad.blocks.resize(n_layers);
  for (size_t t = n_layers; t-- > 0;) {
    LayerBlock& g = out.grad.blocks[t];
    g.weights = delta.transpose() * activations[t];
    g.bias = delta.colwise().sum().transpose();
    if (t == 0) break;
    Eigen::MatrixXd upstream = delta * params.blocks[t].weights;
    switch (spec.layers[t - 1].activation) {
      case Activation::kRelu:
        upstream = upstream.cwiseProduct(
            (activations[t].array() > 0.0).cast<double>().matrix());
        break;
      case Activation::kIdentity:
        break;
      case Activation::kSoftmax:
        throw ConfigError("softmax on a hidden layer");
    }
    delta = std::move(upstream);
  }
  if (!out.grad.AllFinite()) throw NumericError("non-finite gradient");
  return out;
}

std::vector<int> Predict(const ModelParams& params, const ModelSpec& spec,
                         const Eigen::MatrixXd& inputs) {
  const Eigen::MatrixXd out = Forward(params, spec, inputs);
  std::vector<int> labels(static_cast<size_t>(out.rows()));
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    Eigen::Index arg = 0;
    out.row(r).maxCoeff(&arg);
    labels[static_cast<size_t>(r)] = static_cast<int>(arg);
  }
  return labels;
}

std::vector<double> Flatten(const ModelParams& params) {
  std::vector<double> out;
  out.reserve(params.ParameterCount());
  for (const LayerBlock& b : params.blocks) {
    for (Eigen::Index r = 0; r < b.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < b.weights.cols(); ++c) {
        out.push_back(b.weights(r, c));
      }
    }
    for (Eigen::Index r = 0; r < b.bias.size(); ++r) out.push_back(b.bias(r));
  }
  return out;
}

ModelParams Unflatten(std::span<const double> values, const ModelSpec& spec) {
  if (values.size() != spec.ParameterCount()) {
    throw DimensionError("flat vector has " + std::to_string(values.size()) +
                         " values, spec needs " +
                         std::to_string(spec.ParameterCount()));
  }
  ModelParams p = Zeros(spec);
  size_t i = 0;
  for (LayerBlock& b : p.blocks) {
    for (Eigen::Index r = 0; r < b.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < b.weights.cols(); ++c) {
        b.weights(r, c) = values[i++];
      }
    }
    for (Eigen::Index r = 0; r < b.bias.size(); ++r) b.bias(r) = values[i++];
  }
  return p;
}

ModelParams Subtract(const ModelParams& a, const ModelParams& b) {
  ModelParams out = a;
  AddScaledInPlace(out, b, -1.0);
  return out;
}

ModelParams Add(const ModelParams& a, const ModelParams& b) {
  ModelParams out = a;
  AddScaledInPlace(out, b, 1.0);
  return out;
}

ModelParams Scale(const ModelParams& a, double factor) {
  ModelParams out = a;
  for (LayerBlock& blk : out.blocks) {
    blk.weights *= factor;
    blk.bias *= factor;
  }
  return out;
}

void AddScaledInPlace(ModelParams& a, const ModelParams& b, double factor) {
  CheckSameShape(a, b, "AddScaled");
  for (size_t t = 0; t < a.blocks.size(); ++t) {
    a.blocks[t].weights += factor * b.blocks[t].weights;
    a.blocks[t].bias += factor * b.blocks[t].bias;
  }
}

ModelParams Mean(std::span<const ModelParams* const> models) {
  if (models.empty()) throw ConfigError("mean of zero models");
  // Running mean in input order: m_k = m_{k-1} + (x_k - m_{k-1}) / k. The
  // order is fixed, and identical inputs come back unchanged.
  ModelParams mean = *models.front();
  for (size_t i = 1; i < models.size(); ++i) {
    const ModelParams& x = *models[i];
    if (!x.SameShape(mean)) throw DimensionError("mean: shape mismatch");
    const double k = static_cast<double>(i + 1);
    for (size_t t = 0; t < mean.blocks.size(); ++t) {
      LayerBlock& m = mean.blocks[t];
      m.weights += (x.blocks[t].weights - m.weights) / k;
      m.bias += (x.blocks[t].bias - m.bias) / k;
    }
  }
  return mean;
}

}  // namespace mixnn::nn
