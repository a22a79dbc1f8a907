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

#include "mixnn/nn/optimizer.h"

#include <cmath>

#include "mixnn/errors.h"

namespace mixnn::nn {

std::string OptimizerKindName(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind ParseOptimizerKind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ConfigError("unknown optimizer '" + name + "'");
}

void OptimizerConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("optimizer.learning_rate must be a finite value >= 0");
  }
  if (kind == OptimizerKind::kAdam) {
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
        !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
      throw ConfigError("optimizer.adam_beta1/adam_beta2 must lie in (0, 1)");
    }
    if (!(adam_epsilon > 0.0)) {
      throw ConfigError("optimizer.adam_epsilon must be > 0");
    }
  }
}

OptimizerState OptimizerState::Init(const OptimizerConfig& config,
                                    const ModelSpec& spec) {
  OptimizerState state;
  state.kind = config.kind;
  if (config.kind == OptimizerKind::kAdam) {
    state.first_moment = Zeros(spec);
    state.second_moment = Zeros(spec);
  }
  return state;
}

void OptimizerStep(ModelParams& params, const ModelParams& grad,
                   OptimizerState& state, const OptimizerConfig& config) {
  if (!params.SameShape(grad)) {
    throw DimensionError("optimizer step: gradient shape != params shape");
  }
  if (state.kind != config.kind) {
    throw ConfigError("optimizer state does not match optimizer kind");
  }
  ++state.step;
  if (config.kind == OptimizerKind::kSgd) {
    AddScaledInPlace(params, grad, -config.learning_rate);
    return;
  }

  if (!params.SameShape(state.first_moment)) {
    throw DimensionError("optimizer step: moment shape != params shape");
  }
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);
  const double lr = config.learning_rate;
  const double eps = config.adam_epsilon;

  auto update = [&](auto& theta, const auto& g, auto& m, auto& v) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    theta.array() -= lr * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + eps);
  };
  for (size_t l = 0; l < params.blocks.size(); ++l) {
    update(params.blocks[l].weights, grad.blocks[l].weights,
           state.first_moment.blocks[l].weights,
           state.second_moment.blocks[l].weights);
    update(params.blocks[l].bias, grad.blocks[l].bias,
           state.first_moment.blocks[l].bias,
           state.second_moment.blocks[l].bias);
  }
}

}  // namespace mixnn::nn
