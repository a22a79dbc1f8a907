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

#include "mixnn/fl/trace_io.h"

#include "mixnn/binary_io.h"
#include "mixnn/errors.h"
#include "mixnn/nn/params_io.h"

namespace mixnn::fl {
namespace {

constexpr char kMagic[] = "MXNNTRC1";
constexpr uint32_t kVersion = 1;

nn::ModelParams ReadModelAs(std::istream& in, TraceFile& file, bool& have) {
  nn::ModelRecord rec = nn::ReadModel(in);
  if (!have) {
    file.spec = rec.spec;
    have = true;
  } else if (!(rec.spec == file.spec)) {
    throw DimensionError("trace contains models of different specs");
  }
  return std::move(rec.params);
}

}  // namespace

void WriteTraceHeader(std::ostream& out) {
  io::WriteMagic(out, kMagic);
  io::WritePod<uint32_t>(out, kVersion);
}

void WriteTraceRecord(std::ostream& out, const nn::ModelSpec& spec,
                      const RoundTrace& trace) {
  io::WritePod<uint8_t>(out, 1);
  io::WritePod<int32_t>(out, trace.round_index);
  nn::WriteModel(out, spec, trace.global_before);
  io::WritePod<uint32_t>(out,
                         static_cast<uint32_t>(trace.updates_received.size()));
  for (const ClientUpdate& u : trace.updates_received) {
    io::WritePod<int32_t>(out, u.origin_id.value_or(-1));
    nn::WriteModel(out, spec, u.params);
  }
  if (trace.layer_origins.size() != trace.updates_received.size()) {
    throw DimensionError("trace: one layer-origin row per update required");
  }
  for (const std::vector<int>& row : trace.layer_origins) {
    io::WritePod<uint32_t>(out, static_cast<uint32_t>(row.size()));
    for (int o : row) io::WritePod<int32_t>(out, o);
  }
  nn::WriteModel(out, spec, trace.global_after);
  io::WritePod<uint32_t>(out,
                         static_cast<uint32_t>(trace.per_client_sent.size()));
  for (const ClientUpdate& u : trace.per_client_sent) {
    io::WritePod<int32_t>(out, u.origin_id.value_or(-1));
    nn::WriteModel(out, spec, u.params);
  }
  if (!out) throw ConfigError("failed to write trace record");
}

TraceWriter::TraceWriter(const std::filesystem::path& path, nn::ModelSpec spec)
    : out_(path, std::ios::binary), spec_(std::move(spec)) {
  if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
  WriteTraceHeader(out_);
}

TraceWriter::~TraceWriter() {
  if (!closed_) {
    try {
      Close();
    } catch (...) {
    }
  }
}

void TraceWriter::Append(const RoundTrace& trace) {
  WriteTraceRecord(out_, spec_, trace);
  out_.flush();
}

void TraceWriter::Close() {
  if (closed_) return;
  closed_ = true;
  io::WritePod<uint8_t>(out_, 0);
  out_.close();
}

TraceFile ReadTraces(std::istream& in) {
  io::ExpectMagic(in, kMagic);
  const auto version = io::ReadPod<uint32_t>(in);
  if (version != kVersion) {
    throw ConfigError("unsupported trace format version " +
                      std::to_string(version));
  }
  TraceFile file;
  bool have_spec = false;
  while (true) {
    const int marker = in.get();
    if (marker == std::char_traits<char>::eof() || marker == 0) break;
    if (marker != 1) throw ConfigError("corrupt trace record marker");
    RoundTrace t;
    t.round_index = io::ReadPod<int32_t>(in);
    t.global_before = ReadModelAs(in, file, have_spec);
    const auto n = io::ReadPod<uint32_t>(in);
    for (uint32_t i = 0; i < n; ++i) {
      const auto origin = io::ReadPod<int32_t>(in);
      ClientUpdate u;
      if (origin >= 0) u.origin_id = origin;
      u.params = ReadModelAs(in, file, have_spec);
      t.updates_received.push_back(std::move(u));
    }
    for (uint32_t i = 0; i < n; ++i) {
      const auto layers = io::ReadPod<uint32_t>(in);
      std::vector<int> row(layers);
      for (uint32_t l = 0; l < layers; ++l) row[l] = io::ReadPod<int32_t>(in);
      t.layer_origins.push_back(std::move(row));
    }
    t.global_after = ReadModelAs(in, file, have_spec);
    const auto m = io::ReadPod<uint32_t>(in);
    for (uint32_t i = 0; i < m; ++i) {
      const auto origin = io::ReadPod<int32_t>(in);
      ClientUpdate u;
      if (origin >= 0) u.origin_id = origin;
      u.params = ReadModelAs(in, file, have_spec);
      t.per_client_sent.push_back(std::move(u));
    }
    file.rounds.push_back(std::move(t));
  }
  return file;
}

TraceFile LoadTraces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return ReadTraces(in);
}

}  // namespace mixnn::fl
