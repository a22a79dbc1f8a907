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

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "mixnn/errors.h"

namespace mixnn::fl {
namespace {

class TraceIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    data::PopulationConfig c;
    c.num_clients = 4;
    c.samples_per_client = 24;
    c.feature_dim = 5;
    c.num_main_classes = 2;
    pop_ = data::GeneratePopulation(c);
    spec_ = nn::ModelSpec::Dense(5, {4}, 2);
    nn::ModelParams global = nn::InitParams(spec_, 1);
    DirectChannel direct;
    for (int r = 0; r < 3; ++r) {
      traces_.push_back(RunRound(pop_, global, spec_, RoundConfig{}, direct, r));
      global = traces_.back().global_after;
    }
    // Exercise the erased-origin encoding.
    traces_[1].updates_received[2].origin_id.reset();
  }

  static void ExpectSame(const RoundTrace& a, const RoundTrace& b) {
    EXPECT_EQ(a.round_index, b.round_index);
    EXPECT_EQ(a.global_before, b.global_before);
    EXPECT_EQ(a.global_after, b.global_after);
    EXPECT_EQ(a.layer_origins, b.layer_origins);
    ASSERT_EQ(a.updates_received.size(), b.updates_received.size());
    for (size_t i = 0; i < a.updates_received.size(); ++i) {
      EXPECT_EQ(a.updates_received[i].origin_id,
                b.updates_received[i].origin_id);
      EXPECT_EQ(a.updates_received[i].params, b.updates_received[i].params);
    }
    ASSERT_EQ(a.per_client_sent.size(), b.per_client_sent.size());
    for (size_t i = 0; i < a.per_client_sent.size(); ++i) {
      EXPECT_EQ(a.per_client_sent[i].origin_id,
                b.per_client_sent[i].origin_id);
      EXPECT_EQ(a.per_client_sent[i].params, b.per_client_sent[i].params);
    }
  }

  data::Population pop_;
  nn::ModelSpec spec_;
  std::vector<RoundTrace> traces_;
};

TEST_F(TraceIoTest, StreamRoundTripIsBitwise) {
  std::stringstream buf;
  WriteTraceHeader(buf);
  for (const auto& t : traces_) WriteTraceRecord(buf, spec_, t);
  const TraceFile file = ReadTraces(buf);
  EXPECT_EQ(file.spec, spec_);
  ASSERT_EQ(file.rounds.size(), traces_.size());
  for (size_t i = 0; i < traces_.size(); ++i) {
    ExpectSame(file.rounds[i], traces_[i]);
  }
}

TEST_F(TraceIoTest, WriterStreamsRecords) {
  const auto path =
      std::filesystem::temp_directory_path() / "mixnn_trace_io_test.trc";
  {
    TraceWriter writer(path, spec_);
    for (const auto& t : traces_) writer.Append(t);
  }
  const TraceFile file = LoadTraces(path);
  ASSERT_EQ(file.rounds.size(), 3u);
  ExpectSame(file.rounds[2], traces_[2]);
  std::filesystem::remove(path);
}

TEST_F(TraceIoTest, RejectsForeignFile) {
  std::stringstream buf("MXNNPOP1xxxxxxxx");
  EXPECT_THROW(ReadTraces(buf), ConfigError);
}

}  // namespace
}  // namespace mixnn::fl
