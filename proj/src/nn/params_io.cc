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

#include "mixnn/nn/params_io.h"

#include <fstream>

#include "mixnn/binary_io.h"
#include "mixnn/errors.h"

namespace mixnn::nn {
namespace {

constexpr char kMagic[] = "MXNNPRM1";
constexpr uint32_t kVersion = 1;
constexpr uint32_t kMaxWidth = 1u << 20;

}  // namespace

void WriteModel(std::ostream& out, const ModelSpec& spec,
                const ModelParams& params) {
  CheckShape(params, spec);
  io::WriteMagic(out, kMagic);
  io::WritePod<uint32_t>(out, kVersion);
  io::WritePod<uint32_t>(out, static_cast<uint32_t>(spec.num_layers()));
  for (const LayerSpec& l : spec.layers) {
    io::WritePod<uint32_t>(out, static_cast<uint32_t>(l.input_width));
    io::WritePod<uint32_t>(out, static_cast<uint32_t>(l.output_width));
    io::WritePod<uint8_t>(out, static_cast<uint8_t>(l.activation));
  }
  for (const LayerBlock& b : params.blocks) {
    // Eigen stores column-major; the file is row-major.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                        Eigen::RowMajor>
        rows = b.weights;
    io::WriteDoubles(out, rows.data(), static_cast<size_t>(rows.size()));
    io::WriteDoubles(out, b.bias.data(), static_cast<size_t>(b.bias.size()));
  }
  if (!out) throw ConfigError("failed to write model record");
}

ModelRecord ReadModel(std::istream& in) {
  io::ExpectMagic(in, kMagic);
  const auto version = io::ReadPod<uint32_t>(in);
  if (version != kVersion) {
    throw ConfigError("unsupported model format version " +
                      std::to_string(version));
  }
  ModelRecord rec;
  const auto n = io::ReadPod<uint32_t>(in);
  for (uint32_t t = 0; t < n; ++t) {
    const auto in_w = io::ReadPod<uint32_t>(in);
    const auto out_w = io::ReadPod<uint32_t>(in);
    const auto act = io::ReadPod<uint8_t>(in);
    if (in_w == 0 || out_w == 0 || in_w > kMaxWidth || out_w > kMaxWidth ||
        act > static_cast<uint8_t>(Activation::kIdentity)) {
      throw ConfigError("corrupt layer header in model record");
    }
    rec.spec.layers.push_back({static_cast<int>(in_w), static_cast<int>(out_w),
                               static_cast<Activation>(act)});
  }
  rec.spec.Validate();
  rec.params = Zeros(rec.spec);
  for (LayerBlock& b : rec.params.blocks) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        rows(b.weights.rows(), b.weights.cols());
    io::ReadDoubles(in, rows.data(), static_cast<size_t>(rows.size()));
    b.weights = rows;
    io::ReadDoubles(in, b.bias.data(), static_cast<size_t>(b.bias.size()));
  }
  return rec;
}

void SaveModel(const std::filesystem::path& path, const ModelSpec& spec,
               const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  WriteModel(out, spec, params);
}

ModelRecord LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return ReadModel(in);
}

}  // namespace mixnn::nn
