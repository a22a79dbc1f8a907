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

#include "mixnn/harness/results_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixnn/errors.h"
#include "mixnn/harness/config_json.h"

namespace mixnn::harness {
namespace {

constexpr char kHeader[] =
    "experiment_id,repetition,fold,round,channel,model_accuracy,"
    "inference_accuracy_passive,inference_accuracy_active,aux_ratio,extra,"
    "error";

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Opt(const std::optional<double>& v) {
  return v ? Num(*v) : std::string();
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

// Splits one CSV line, honoring double-quoted cells.
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else {
      cells.back() += c;
    }
  }
  return cells;
}

double ParseDouble(const std::string& s, const char* column) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("results: bad value '") + s +
                      "' in column " + column);
  }
}

std::optional<double> ParseOpt(const std::string& s, const char* column) {
  if (s.empty()) return std::nullopt;
  return ParseDouble(s, column);
}

}  // namespace

void WriteResultsCsv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kHeader << '\n';
  for (const ResultRow& r : rows) {
    std::string extra;
    for (const auto& [k, v] : r.extra) {
      if (!extra.empty()) extra += ';';
      extra += k + "=" + v;
    }
    out << r.experiment_id << ',' << r.repetition << ',' << r.fold << ','
        << r.round << ',' << r.channel << ',' << Opt(r.model_accuracy) << ','
        << Opt(r.inference_accuracy_passive) << ','
        << Opt(r.inference_accuracy_active) << ',' << Num(r.aux_ratio) << ','
        << extra << ',' << (r.error.empty() ? "" : Quote(r.error)) << '\n';
  }
}

std::vector<ResultRow> ReadResultsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw ConfigError("results: missing or unexpected header row");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != 11) {
      throw ConfigError("results: expected 11 columns, got " +
                        std::to_string(c.size()));
    }
    ResultRow r;
    r.experiment_id = c[0];
    r.repetition = static_cast<int>(ParseDouble(c[1], "repetition"));
    r.fold = static_cast<int>(ParseDouble(c[2], "fold"));
    r.round = static_cast<int>(ParseDouble(c[3], "round"));
    r.channel = c[4];
    r.model_accuracy = ParseOpt(c[5], "model_accuracy");
    r.inference_accuracy_passive =
        ParseOpt(c[6], "inference_accuracy_passive");
    r.inference_accuracy_active = ParseOpt(c[7], "inference_accuracy_active");
    r.aux_ratio = ParseDouble(c[8], "aux_ratio");
    std::stringstream extra(c[9]);
    std::string kv;
    while (std::getline(extra, kv, ';')) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("results: malformed extra entry '" + kv + "'");
      }
      r.extra[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    r.error = c[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

void SaveResults(const std::filesystem::path& path,
                 std::span<const ResultRow> rows,
                 const ExperimentConfig& config) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string());
    WriteResultsCsv(out, rows);
  }
  std::ofstream sidecar(path.string() + ".json");
  if (!sidecar) throw ConfigError("cannot open " + path.string() + ".json");
  sidecar << ConfigToJson(config).dump(2) << '\n';
}

std::vector<ResultRow> LoadResults(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return ReadResultsCsv(in);
}

}  // namespace mixnn::harness
