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

#ifndef MIXNN_HARNESS_REPORT_H_
#define MIXNN_HARNESS_REPORT_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mixnn/analysis/neighbors.h"
#include "mixnn/harness/experiment.h"

namespace mixnn::harness {

inline constexpr const char* kMetrics[] = {
    "model_accuracy", "inference_accuracy_passive",
    "inference_accuracy_active"};

struct SummaryRow {
  std::vector<std::string> key;
  std::string metric;
  size_t count = 0;
  double mean = 0.0;
  // Population standard deviation (divide by count).
  double sd = 0.0;
};

struct CdfTable {
  std::vector<std::string> key;
  std::string metric;
  std::vector<analysis::CdfPoint> points;
};

struct Summary {
  std::vector<std::string> grouping;
  std::vector<SummaryRow> stats;
  std::vector<CdfTable> cdfs;
};

// Value of a grouping column: experiment_id, repetition, fold, round,
// channel, aux_ratio, or any key of ResultRow::extra.
std::string ColumnValue(const ResultRow& row, const std::string& column);

// Metric value by name (see kMetrics).
std::optional<double> MetricValue(const ResultRow& row,
                                  const std::string& metric);

// Groups rows by `grouping` (groups ordered by first appearance) and
// summarizes every metric present. Rows carrying an error are skipped.
// Throws ConfigError for empty input or an unknown grouping column.
Summary Report(std::span<const ResultRow> rows,
               const std::vector<std::string>& grouping);

void WriteSummaryCsv(std::ostream& out, const Summary& summary);
void WriteCdfCsv(std::ostream& out, const Summary& summary);

}  // namespace mixnn::harness

#endif  // MIXNN_HARNESS_REPORT_H_
