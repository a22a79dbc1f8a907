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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mixnn/analysis/neighbors.h"
#include "mixnn/harness/experiment.h"
#include "mixnn/mixer/mixer.h"
#include "mixnn/nn/model.h"
#include "oracles.h"

namespace mixnn {
namespace {

using harness::ChannelKind;
using harness::ExperimentConfig;
using harness::ResultRow;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

double RelativeError(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double MaxRelative(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, RelativeError(a[i], b[i]));
  }
  return worst;
}

// Mean of `field` over all rows of round `round`.
double MeanAt(const std::vector<ResultRow>& rows, int round,
              std::optional<double> ResultRow::*field) {
  double total = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::fprintf(stderr, "error row: %s\n", r.error.c_str());
      return NAN;
    }
    if (r.round == round && (r.*field).has_value()) {
      total += *(r.*field);
      ++n;
    }
  }
  return n == 0 ? NAN : total / n;
}

std::string Format(const char* fmt, double a, double b = 0, double c = 0,
                   double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

ExperimentConfig Defaults(ChannelKind channel) {
  ExperimentConfig c;
  c.channel = channel;
  return c;
}

// 1. aggregate(mix(U)) == aggregate(U) for batch and streaming mixing.
Outcome UtilityEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const nn::ModelSpec spec = testing::RandomSpec(gen, 6, 12);
    const int c = 2 + static_cast<int>(gen() % 19);
    const auto updates = testing::RandomUpdates(spec, c, gen);
    const auto direct = nn::Flatten(fl::Aggregate(updates));

    const auto mixed = mixer::MixBatch(updates, gen());
    if (!mixer::VerifyAssignment(mixed.assignment)) {
      return {false, "mix_batch produced a non-bijective assignment"};
    }
    worst = std::max(worst,
                     MaxRelative(nn::Flatten(fl::Aggregate(mixed.updates)),
                                 direct));

    const int k = 2 + static_cast<int>(gen() % 8);
    mixer::StreamingMixer proxy(k, spec, gen());
    std::vector<fl::ClientUpdate> out;
    for (const auto& u : updates) {
      if (auto e = proxy.Feed(u)) out.push_back(e->update);
    }
    for (auto& e : proxy.Flush()) out.push_back(e.update);
    if (out.size() != updates.size()) {
      return {false, "streaming emitted " + std::to_string(out.size()) +
                         " updates for " + std::to_string(c) + " fed"};
    }
    worst = std::max(worst,
                     MaxRelative(nn::Flatten(fl::Aggregate(out)), direct));
  }
  const double t = Seconds(start);
  return {worst <= 1e-9 && t < 10.0,
          Format("200 cases, max relative error %.3g (<= 1e-9), %.2fs (< 10s)",
                 worst, t)};
}

// 2. direct and mixer-batch training curves coincide.
Outcome UtilityParity() {
  const auto start = std::chrono::steady_clock::now();
  const auto direct = harness::RunExperiment(Defaults(ChannelKind::kDirect));
  const auto mixed = harness::RunExperiment(Defaults(ChannelKind::kMixerBatch));
  if (direct.size() != mixed.size()) return {false, "row count mismatch"};
  double worst = 0.0;
  for (size_t i = 0; i < direct.size(); ++i) {
    if (!direct[i].model_accuracy || !mixed[i].model_accuracy) {
      return {false, "missing model accuracy"};
    }
    worst = std::max(worst, std::abs(*direct[i].model_accuracy -
                                     *mixed[i].model_accuracy));
  }
  const double t = Seconds(start);
  return {worst < 1e-6 && t < 120.0,
          Format("max per-round |direct - mixer| = %.3g (< 1e-6), final "
                 "accuracy %.4f, %.1fs (< 120s)",
                 worst, *direct.back().model_accuracy, t)};
}

// 3. the active attack against an unprotected federation.
Outcome AttackEfficacy() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = Defaults(ChannelKind::kDirect);
  c.repetitions = 5;
  const auto rows = harness::RunExperiment(c);
  const double active = MeanAt(rows, 5, &ResultRow::inference_accuracy_active);
  const double passive =
      MeanAt(rows, 5, &ResultRow::inference_accuracy_passive);
  const double t = Seconds(start);
  return {active >= 0.9 && t < 300.0,
          Format("active accuracy at round 5 = %.4f (>= 0.9), passive %.4f, "
                 "%.1fs (< 300s)",
                 active, passive, t)};
}

// 4. the same attack through the mixer.
Outcome MixerProtection() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c = Defaults(ChannelKind::kMixerBatch);
  c.repetitions = 5;
  const auto rows = harness::RunExperiment(c);
  const double active = MeanAt(rows, 5, &ResultRow::inference_accuracy_active);
  double over_rounds = 0.0;
  for (int r = 1; r <= 5; ++r) {
    over_rounds += MeanAt(rows, r, &ResultRow::inference_accuracy_active) / 5;
  }
  const double t = Seconds(start);
  return {std::abs(active - 0.5) <= 0.15 && t < 300.0,
          Format("active accuracy at round 5 = %.4f (0.5 +/- 0.15), mean over "
                 "rounds 1-5 %.4f, %.1fs (< 300s)",
                 active, over_rounds, t)};
}

// 5. direct > noisy > mixer leakage, and the utility cost of noise.
Outcome BaselineOrdering() {
  const auto start = std::chrono::steady_clock::now();
  auto run = [](ChannelKind k) {
    ExperimentConfig c = Defaults(k);
    c.repetitions = 40;
    c.attack_rounds = c.rounds.num_rounds;
    return harness::RunExperiment(c);
  };
  const auto direct = run(ChannelKind::kDirect);
  const auto noisy = run(ChannelKind::kNoisy);
  const auto mixed = run(ChannelKind::kMixerBatch);
  const int last = ExperimentConfig{}.rounds.num_rounds;
  auto passive = [last](const std::vector<ResultRow>& rows) {
    return MeanAt(rows, last, &ResultRow::inference_accuracy_passive);
  };
  auto active = [last](const std::vector<ResultRow>& rows) {
    return MeanAt(rows, last, &ResultRow::inference_accuracy_active);
  };
  const double d = passive(direct), n = passive(noisy), m = passive(mixed);
  const double util_d = MeanAt(direct, last, &ResultRow::model_accuracy);
  const double util_n = MeanAt(noisy, last, &ResultRow::model_accuracy);
  const double t = Seconds(start);
  std::printf(
      "  criterion 5 detail: active attack at round %d: direct %.4f, noisy "
      "%.4f, mixer %.4f\n",
      last, active(direct), active(noisy), active(mixed));
  const bool ordering = d > n && n > m && d - m >= 0.3;
  const bool utility = util_n <= util_d - 0.05;
  return {ordering && utility && t < 600.0,
          Format("passive accuracy at round 10: direct %.4f > noisy %.4f > "
                 "mixer %.4f (direct - mixer >= 0.3)",
                 d, n, m) +
              Format("; final model accuracy noisy %.4f <= direct %.4f - "
                     "0.05; %.1fs (< 600s)",
                     util_n, util_d, t)};
}

// 6. more background knowledge helps against direct, not against the mixer.
Outcome BackgroundMonotonicity() {
  const std::vector<double> ratios = {0.25, 0.5, 0.75, 1.0};
  std::string detail;
  bool pass = true;
  for (ChannelKind k : {ChannelKind::kDirect, ChannelKind::kMixerBatch}) {
    ExperimentConfig c = Defaults(k);
    c.repetitions = 10;
    c.passive_attack = false;
    std::vector<double> acc;
    for (double r : ratios) {
      acc.push_back(
          MeanAt(harness::RunExperiment(harness::WithParameter(c, "aux_ratio", r)),
                 5, &ResultRow::inference_accuracy_active));
    }
    detail += harness::ChannelName(k) + " [";
    for (size_t i = 0; i < acc.size(); ++i) {
      detail += Format(i ? " %.4f" : "%.4f", acc[i]);
      if (k == ChannelKind::kDirect) {
        if (i > 0 && acc[i] < acc[i - 1] - 0.05) pass = false;
      } else if (std::abs(acc[i] - 0.5) > 0.15) {
        pass = false;
      }
      if (std::isnan(acc[i])) pass = false;
    }
    detail += "] ";
  }
  return {pass, detail +
                    "(direct non-decreasing within 0.05, mixer within 0.5 +/- "
                    "0.15, ratios 0.25/0.5/0.75/1.0)"};
}

// 7. analytic gradients against central differences.
Outcome GradientCorrectness() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(707);
  int models = 0, rejected = 0, failures = 0, checked = 0;
  double worst = 0.0;
  while (models < 50) {
    const nn::ModelSpec spec = testing::RandomSpec(gen, 3, 16);
    const nn::ModelParams p = testing::RandomParams(spec, gen);
    const nn::Batch batch = testing::RandomBatch(spec, 5, gen);
    // Central differences are only valid away from relu kinks.
    if (testing::MinReluMargin(p, spec, batch) < 1e-3) {
      ++rejected;
      continue;
    }
    const auto lg = nn::LossAndGradient(p, spec, batch);
    const auto check =
        testing::CheckGradient(p, spec, batch, lg.grad, 1e-5, 1e-4, 1e-7);
    failures += check.failures;
    checked += check.checked;
    worst = std::max(worst, check.worst_relative);
    ++models;
  }
  const double t = Seconds(start);
  return {failures == 0 && t < 30.0,
          Format("50 models, %.0f scalars, %.0f mismatches, worst relative "
                 "%.3g, %.2fs (< 30s)",
                 checked, failures, worst, t) +
              " (" + std::to_string(rejected) + " near-kink draws skipped)"};
}

// 8. bijectivity, conservation and priming of the proxy.
Outcome MixerStructure() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(808);
  const nn::ModelSpec spec = testing::RandomSpec(gen, 5, 4);
  const auto updates = testing::RandomUpdates(spec, 12, gen);
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const int c = 2 + static_cast<int>(seed % 11);
    const std::span<const fl::ClientUpdate> some(updates.data(), c);
    if (!mixer::VerifyAssignment(mixer::MixBatch(some, seed).assignment)) {
      return {false, "non-bijective assignment at seed " +
                         std::to_string(seed)};
    }
  }

  int sequences = 0;
  for (; sequences < 500; ++sequences) {
    const nn::ModelSpec s = testing::RandomSpec(gen, 4, 3);
    const int k = 2 + static_cast<int>(gen() % 6);
    mixer::StreamingMixer proxy(k, s, gen());
    std::vector<fl::ClientUpdate> fed, emitted;
    int since_empty = 0;
    const int ops = 1 + static_cast<int>(gen() % 25);
    for (int op = 0; op < ops; ++op) {
      if (gen() % 6 == 0) {
        for (auto& e : proxy.Flush()) emitted.push_back(e.update);
        since_empty = 0;
      } else {
        fed.push_back(testing::RandomUpdates(s, 1, gen)[0]);
        ++since_empty;
        const auto e = proxy.Feed(fed.back());
        // Priming: silent for the first k feeds, one emission after.
        if (e.has_value() != (since_empty > k)) {
          return {false, "priming contract violated"};
        }
        if (e) emitted.push_back(e->update);
      }
      std::vector<fl::ClientUpdate> held = emitted;
      for (size_t i = 0; i < proxy.buffered(); ++i) {
        fl::ClientUpdate u;
        for (const auto& list : proxy.lists()) {
          u.params.blocks.push_back(list[i].block);
        }
        held.push_back(u);
      }
      if (testing::LayerMultisets(held) != testing::LayerMultisets(fed)) {
        return {false, "multiset conservation violated"};
      }
    }
  }
  const double t = Seconds(start);
  return {t < 30.0, Format("1000 seeds bijective, %.0f feed/flush sequences "
                           "conserved, priming holds, %.2fs (< 30s)",
                           sequences, t)};
}

// 9. no signal, no leakage.
Outcome NullSignal() {
  std::string detail;
  bool pass = true;
  for (ChannelKind k : {ChannelKind::kDirect, ChannelKind::kMixerBatch,
                        ChannelKind::kMixerStreaming, ChannelKind::kNoisy}) {
    ExperimentConfig c = Defaults(k);
    c.population.attribute.skew = 0.0;
    c.repetitions = 10;
    const auto rows = harness::RunExperiment(c);
    const double n = c.population.num_clients * c.repetitions;
    const double bound = 3.0 * std::sqrt(0.25 / n);
    const double passive =
        MeanAt(rows, 5, &ResultRow::inference_accuracy_passive);
    const double active =
        MeanAt(rows, 5, &ResultRow::inference_accuracy_active);
    pass = pass && std::abs(passive - 0.5) <= bound &&
           std::abs(active - 0.5) <= bound;
    detail += harness::ChannelName(k) +
              Format(" %.3f/%.3f ", passive, active);
  }
  return {pass, detail + Format("(passive/active at round 5, within 0.5 +/- "
                                "%.4f)",
                                3.0 * std::sqrt(0.25 / 200.0))};
}

// 10. analysis against brute force.
Outcome AnalysisOracles() {
  std::mt19937_64 gen(1010);
  for (int trial = 0; trial < 100; ++trial) {
    const nn::ModelSpec spec = testing::RandomSpec(gen, 3, 5);
    const int c = 2 + static_cast<int>(gen() % 19);
    const auto updates = testing::RandomUpdates(spec, c, gen);
    const nn::ModelParams base = testing::RandomParams(spec, gen);
    const auto dist = analysis::PairwiseDistances(updates, base);
    std::vector<double> radii = {analysis::CoveringRadius(dist)};
    std::uniform_int_distribution<int> pick(0, c - 1);
    for (int i = 0; i < 3; ++i) {
      const int a = pick(gen), b = pick(gen);
      if (a != b) radii.push_back(dist[a][b]);
    }
    for (double r : radii) {
      if (analysis::NeighborCounts(updates, base, r).counts !=
          testing::BruteForceNeighborCounts(updates, base, r)) {
        return {false, "neighbor counts differ from brute force"};
      }
    }
    std::vector<double> values(1 + gen() % 50);
    std::uniform_int_distribution<int> coarse(0, 9);
    for (double& v : values) v = coarse(gen) / 4.0;
    const auto got = analysis::Cdf(values);
    const auto expected = testing::SortCdf(values);
    if (got.size() != expected.size()) return {false, "cdf size differs"};
    for (size_t i = 0; i < got.size(); ++i) {
      if (got[i].value != expected[i].first ||
          std::abs(got[i].fraction - expected[i].second) > 1e-15) {
        return {false, "cdf differs from sort oracle"};
      }
    }
  }
  return {true, "100 instances: neighbor counts and cdf match the oracles"};
}

}  // namespace
}  // namespace mixnn

int main() {
  using mixnn::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>>
      criteria = {
          {"utility equivalence", mixnn::UtilityEquivalence},
          {"end-to-end utility parity", mixnn::UtilityParity},
          {"attack efficacy without defense", mixnn::AttackEfficacy},
          {"mixer protection", mixnn::MixerProtection},
          {"baseline ordering", mixnn::BaselineOrdering},
          {"background-knowledge monotonicity",
           mixnn::BackgroundMonotonicity},
          {"gradient correctness", mixnn::GradientCorrectness},
          {"mixer structural properties", mixnn::MixerStructure},
          {"null-signal control", mixnn::NullSignal},
          {"analysis oracle equivalence", mixnn::AnalysisOracles},
      };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
