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

#include "mixnn/harness/report.h"

#include <cmath>
#include <cstdio>
#include <map>

#include "mixnn/errors.h"

namespace mixnn::harness {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string ColumnValue(const ResultRow& row, const std::string& column) {
  if (column == "experiment_id") return row.experiment_id;
  if (column == "repetition") return std::to_string(row.repetition);
  if (column == "fold") return std::to_string(row.fold);
  if (column == "round") return std::to_string(row.round);
  if (column == "channel") return row.channel;
  if (column == "aux_ratio") return Num(row.aux_ratio);
  if (auto it = row.extra.find(column); it != row.extra.end()) {
    return it->second;
  }
  throw ConfigError("report: unknown grouping column '" + column + "'");
}

std::optional<double> MetricValue(const ResultRow& row,
                                  const std::string& metric) {
  if (metric == "model_accuracy") return row.model_accuracy;
  if (metric == "inference_accuracy_passive") {
    return row.inference_accuracy_passive;
  }
  if (metric == "inference_accuracy_active") {
    return row.inference_accuracy_active;
  }
  throw ConfigError("report: unknown metric '" + metric + "'");
}

Summary Report(std::span<const ResultRow> rows,
               const std::vector<std::string>& grouping) {
  if (rows.empty()) throw ConfigError("report: no rows");
  Summary summary;
  summary.grouping = grouping;

  std::vector<std::vector<std::string>> keys;
  std::map<std::vector<std::string>, size_t> index;
  std::vector<std::map<std::string, std::vector<double>>> values;
  for (const ResultRow& row : rows) {
    if (!row.error.empty()) continue;
    std::vector<std::string> key;
    for (const std::string& col : grouping) {
      key.push_back(ColumnValue(row, col));
    }
    auto [it, inserted] = index.try_emplace(key, keys.size());
    if (inserted) {
      keys.push_back(key);
      values.emplace_back();
    }
    for (const char* metric : kMetrics) {
      if (auto v = MetricValue(row, metric)) {
        values[it->second][metric].push_back(*v);
      }
    }
  }
  if (keys.empty()) throw ConfigError("report: every row carries an error");

  for (size_t g = 0; g < keys.size(); ++g) {
    for (const char* metric : kMetrics) {
      auto it = values[g].find(metric);
      if (it == values[g].end()) continue;
      const std::vector<double>& xs = it->second;
      double sum = 0.0;
      for (double x : xs) sum += x;
      const double mean = sum / static_cast<double>(xs.size());
      double sq = 0.0;
      for (double x : xs) sq += (x - mean) * (x - mean);
      summary.stats.push_back(
          {keys[g], metric, xs.size(), mean,
           std::sqrt(sq / static_cast<double>(xs.size()))});
      summary.cdfs.push_back({keys[g], metric, analysis::Cdf(xs)});
    }
  }
  return summary;
}

void WriteSummaryCsv(std::ostream& out, const Summary& summary) {
  for (const std::string& col : summary.grouping) out << col << ',';
  out << "metric,count,mean,sd\n";
  for (const SummaryRow& s : summary.stats) {
    for (const std::string& k : s.key) out << k << ',';
    out << s.metric << ',' << s.count << ',' << Num(s.mean) << ','
        << Num(s.sd) << '\n';
  }
}

void WriteCdfCsv(std::ostream& out, const Summary& summary) {
  for (const std::string& col : summary.grouping) out << col << ',';
  out << "metric,value,cumulative_fraction\n";
  for (const CdfTable& t : summary.cdfs) {
    for (const analysis::CdfPoint& p : t.points) {
      for (const std::string& k : t.key) out << k << ',';
      out << t.metric << ',' << Num(p.value) << ',' << Num(p.fraction)
          << '\n';
    }
  }
}

}  // namespace mixnn::harness
