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

#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mixnn/errors.h"
#include "oracles.h"

namespace mixnn::nn {
namespace {

TEST(ParamsIoTest, StreamRoundTripIsBitwise) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 10; ++i) {
    ModelRecord record;
    record.spec = testing::RandomSpec(gen, 4, 7);
    record.params = testing::RandomParams(record.spec, gen, 1e3);
    std::stringstream buf;
    WriteModel(buf, record.spec, record.params);
    const ModelRecord back = ReadModel(buf);
    EXPECT_EQ(back.spec, record.spec);
    EXPECT_EQ(back.params, record.params);
  }
}

TEST(ParamsIoTest, FileRoundTrip) {
  ModelRecord record;
  record.spec = ModelSpec::Dense(4, {3}, 2);
  record.params = InitParams(record.spec, 1);
  const auto path =
      std::filesystem::temp_directory_path() / "mixnn_params_io_test.bin";
  SaveModel(path, record.spec, record.params);
  EXPECT_EQ(LoadModel(path).params, record.params);
  std::filesystem::remove(path);
}

TEST(ParamsIoTest, RejectsBadMagic) {
  std::stringstream buf("NOTAMODELFILE___");
  EXPECT_THROW(ReadModel(buf), ConfigError);
}

TEST(ParamsIoTest, RejectsTruncatedInput) {
  ModelRecord record;
  record.spec = ModelSpec::Dense(4, {3}, 2);
  record.params = InitParams(record.spec, 1);
  std::stringstream buf;
  WriteModel(buf, record.spec, record.params);
  std::string bytes = buf.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 5));
  EXPECT_THROW(ReadModel(cut), ConfigError);
}

TEST(ParamsIoTest, MissingFileThrows) {
  EXPECT_THROW(LoadModel("/nonexistent/model.bin"), ConfigError);
}

}  // namespace
}  // namespace mixnn::nn
