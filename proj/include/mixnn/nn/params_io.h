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

#ifndef MIXNN_NN_PARAMS_IO_H_
#define MIXNN_NN_PARAMS_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>

#include "mixnn/nn/model.h"

namespace mixnn::nn {

// Binary model record:
//   "MXNNPRM1"  magic
//   u32         format version (1)
//   u32         layer count n
//   n x {u32 input_width, u32 output_width, u8 activation}
//   n x {f64[output_width * input_width] weights (row-major),
//        f64[output_width] bias}
// All integers and doubles little-endian. Round-trips bitwise.
struct ModelRecord {
  ModelSpec spec;
  ModelParams params;
};

void WriteModel(std::ostream& out, const ModelSpec& spec,
                const ModelParams& params);
ModelRecord ReadModel(std::istream& in);

void SaveModel(const std::filesystem::path& path, const ModelSpec& spec,
               const ModelParams& params);
ModelRecord LoadModel(const std::filesystem::path& path);

}  // namespace mixnn::nn

#endif  // MIXNN_NN_PARAMS_IO_H_
