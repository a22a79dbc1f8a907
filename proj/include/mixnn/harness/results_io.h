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

#ifndef MIXNN_HARNESS_RESULTS_IO_H_
#define MIXNN_HARNESS_RESULTS_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mixnn/harness/experiment.h"

namespace mixnn::harness {

// Comma-separated table with a header row:
//   experiment_id,repetition,fold,round,channel,model_accuracy,
//   inference_accuracy_passive,inference_accuracy_active,aux_ratio,extra,error
// Missing metrics are empty cells; doubles use %.17g so tables round-trip
// exactly; `extra` is "key=value;key=value"; `error` is quoted.
void WriteResultsCsv(std::ostream& out, std::span<const ResultRow> rows);
std::vector<ResultRow> ReadResultsCsv(std::istream& in);

// Writes `path` (CSV) and `path` + ".json" (resolved config).
void SaveResults(const std::filesystem::path& path,
                 std::span<const ResultRow> rows,
                 const ExperimentConfig& config);
std::vector<ResultRow> LoadResults(const std::filesystem::path& path);

}  // namespace mixnn::harness

#endif  // MIXNN_HARNESS_RESULTS_IO_H_
