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

#ifndef MIXNN_FL_TRACE_IO_H_
#define MIXNN_FL_TRACE_IO_H_

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "mixnn/fl/federated.h"
#include "mixnn/nn/model.h"

namespace mixnn::fl {

// Round trace file: "MXNNTRC1", u32 version, then one record per round:
//   u8 1 (record marker), i32 round_index,
//   model global_before, u32 n, n x {i32 origin (-1 = erased), model},
//   n x {u32 layers, i32[layers] layer origins}, model global_after,
//   u32 m, m x {i32 client_id, model}
// A u8 0 marker (or end of file) terminates the stream. Models use the
// nn::WriteModel record format.
class TraceWriter {
 public:
  TraceWriter(const std::filesystem::path& path, nn::ModelSpec spec);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void Append(const RoundTrace& trace);
  void Close();

 private:
  std::ofstream out_;
  nn::ModelSpec spec_;
  bool closed_ = false;
};

void WriteTraceHeader(std::ostream& out);
void WriteTraceRecord(std::ostream& out, const nn::ModelSpec& spec,
                      const RoundTrace& trace);

struct TraceFile {
  nn::ModelSpec spec;
  std::vector<RoundTrace> rounds;
};

TraceFile ReadTraces(std::istream& in);
TraceFile LoadTraces(const std::filesystem::path& path);

}  // namespace mixnn::fl

#endif  // MIXNN_FL_TRACE_IO_H_
