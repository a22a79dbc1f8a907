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

#ifndef MIXNN_HARNESS_CONFIG_JSON_H_
#define MIXNN_HARNESS_CONFIG_JSON_H_

#include <filesystem>

#include "json.hpp"
#include "mixnn/harness/experiment.h"

namespace mixnn::harness {

inline constexpr int kConfigVersion = 1;

// Fully resolved configuration, including "version".
nlohmann::json ConfigToJson(const ExperimentConfig& config);

// Applies the keys present in `j` on top of `base`. Unknown keys and type
// mismatches throw ConfigError naming the field path.
ExperimentConfig ConfigFromJson(const nlohmann::json& j,
                                const ExperimentConfig& base = {});

ExperimentConfig LoadConfig(const std::filesystem::path& path,
                            const ExperimentConfig& base = {});

}  // namespace mixnn::harness

#endif  // MIXNN_HARNESS_CONFIG_JSON_H_
