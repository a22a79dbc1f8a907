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

#ifndef MIXNN_NN_OPTIMIZER_H_
#define MIXNN_NN_OPTIMIZER_H_

#include <cstdint>
#include <string>

#include "mixnn/nn/model.h"

namespace mixnn::nn {

enum class OptimizerKind { kSgd, kAdam };

std::string OptimizerKindName(OptimizerKind kind);
OptimizerKind ParseOptimizerKind(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgd;
  double learning_rate = 0.05;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void Validate() const;
};

// Moment estimates for Adam; unused (empty) for SGD.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kSgd;
  int64_t step = 0;
  ModelParams first_moment;
  ModelParams second_moment;

  static OptimizerState Init(const OptimizerConfig& config,
                             const ModelSpec& spec);
};

// Applies one update to `params` in place and advances `state`.
//   sgd:  theta -= lr * g
//   adam: bias-corrected first/second moment step.
void OptimizerStep(ModelParams& params, const ModelParams& grad,
                   OptimizerState& state, const OptimizerConfig& config);

}  // namespace mixnn::nn

#endif  // MIXNN_NN_OPTIMIZER_H_
