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

#include "mixnn/harness/config_json.h"

#include <fstream>
#include <set>
#include <string>

#include "mixnn/errors.h"

namespace mixnn::harness {
namespace {

using nlohmann::json;

void CheckKeys(const json& j, const std::string& path,
               const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw ConfigError((path.empty() ? "" : path + ".") + it.key() +
                        ": unknown field");
    }
  }
}

template <typename T>
void Read(const json& j, const std::string& key, const std::string& path,
          T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError((path.empty() ? "" : path + ".") + key +
                      ": wrong type (" + e.what() + ")");
  }
}

}  // namespace

json ConfigToJson(const ExperimentConfig& c) {
  const auto& p = c.population;
  const auto& r = c.rounds;
  return json{
      {"version", kConfigVersion},
      {"experiment_id", c.experiment_id},
      {"population",
       {{"num_clients", p.num_clients},
        {"samples_per_client", p.samples_per_client},
        {"feature_dim", p.feature_dim},
        {"num_main_classes", p.num_main_classes},
        {"num_attribute_classes", p.attribute.num_attribute_classes},
        {"skew", p.attribute.skew},
        {"attribute_balance", p.attribute_balance},
        {"test_fraction", p.test_fraction},
        {"class_separation", p.class_separation},
        {"attribute_offset_scale", p.attribute_offset_scale},
        {"label_skew", p.label_skew},
        {"label_skew_fraction", p.label_skew_fraction}}},
      {"hidden_widths", c.hidden_widths},
      {"rounds",
       {{"num_rounds", r.num_rounds},
        {"local_epochs", r.local_epochs},
        {"batch_size", r.batch_size},
        {"participants_per_round", r.participants_per_round},
        {"optimizer", nn::OptimizerKindName(r.optimizer.kind)},
        {"learning_rate", r.optimizer.learning_rate},
        {"adam_beta1", r.optimizer.adam_beta1},
        {"adam_beta2", r.optimizer.adam_beta2},
        {"adam_epsilon", r.optimizer.adam_epsilon}}},
      {"channel", ChannelName(c.channel)},
      {"noise_sigma", c.noise_sigma},
      {"mixer_buffer_size", c.mixer_buffer_size},
      {"attack",
       {{"aux_ratio", c.attack.aux_ratio},
        {"reference_rounds", c.attack.reference_rounds},
        {"multi_round_accumulation", c.attack.multi_round_accumulation},
        {"rebuild_each_round", c.attack.rebuild_each_round},
        {"passive", c.passive_attack},
        {"active", c.active_attack},
        {"attack_rounds", c.attack_rounds},
        {"ground_truth", attack::GroundTruthRuleName(c.ground_truth)}}},
      {"repetitions", c.repetitions},
      {"folds", c.folds},
      {"master_seed", c.master_seed},
      {"output_path", c.output_path},
      {"trace_path", c.trace_path},
  };
}

ExperimentConfig ConfigFromJson(const json& j, const ExperimentConfig& base) {
  CheckKeys(j, "",
            {"version", "experiment_id", "population", "hidden_widths",
             "rounds", "channel", "noise_sigma", "mixer_buffer_size",
             "attack", "repetitions", "folds", "master_seed", "output_path",
             "trace_path"});
  if (j.contains("version")) {
    int version = 0;
    Read(j, "version", "", version);
    if (version != kConfigVersion) {
      throw ConfigError("version: unsupported config version " +
                        std::to_string(version));
    }
  }
  ExperimentConfig c = base;
  Read(j, "experiment_id", "", c.experiment_id);
  if (j.contains("population")) {
    const json& p = j.at("population");
    CheckKeys(p, "population",
              {"num_clients", "samples_per_client", "feature_dim",
               "num_main_classes", "num_attribute_classes", "skew",
               "attribute_balance", "test_fraction", "class_separation",
               "attribute_offset_scale", "label_skew",
               "label_skew_fraction"});
    auto& pc = c.population;
    Read(p, "num_clients", "population", pc.num_clients);
    Read(p, "samples_per_client", "population", pc.samples_per_client);
    Read(p, "feature_dim", "population", pc.feature_dim);
    Read(p, "num_main_classes", "population", pc.num_main_classes);
    Read(p, "num_attribute_classes", "population",
         pc.attribute.num_attribute_classes);
    Read(p, "skew", "population", pc.attribute.skew);
    Read(p, "attribute_balance", "population", pc.attribute_balance);
    Read(p, "test_fraction", "population", pc.test_fraction);
    Read(p, "class_separation", "population", pc.class_separation);
    Read(p, "attribute_offset_scale", "population",
         pc.attribute_offset_scale);
    Read(p, "label_skew", "population", pc.label_skew);
    Read(p, "label_skew_fraction", "population", pc.label_skew_fraction);
  }
  Read(j, "hidden_widths", "", c.hidden_widths);
  if (j.contains("rounds")) {
    const json& r = j.at("rounds");
    CheckKeys(r, "rounds",
              {"num_rounds", "local_epochs", "batch_size",
               "participants_per_round", "optimizer", "learning_rate",
               "adam_beta1", "adam_beta2", "adam_epsilon"});
    auto& rc = c.rounds;
    Read(r, "num_rounds", "rounds", rc.num_rounds);
    Read(r, "local_epochs", "rounds", rc.local_epochs);
    Read(r, "batch_size", "rounds", rc.batch_size);
    Read(r, "participants_per_round", "rounds", rc.participants_per_round);
    if (r.contains("optimizer")) {
      std::string kind;
      Read(r, "optimizer", "rounds", kind);
      rc.optimizer.kind = nn::ParseOptimizerKind(kind);
    }
    Read(r, "learning_rate", "rounds", rc.optimizer.learning_rate);
    Read(r, "adam_beta1", "rounds", rc.optimizer.adam_beta1);
    Read(r, "adam_beta2", "rounds", rc.optimizer.adam_beta2);
    Read(r, "adam_epsilon", "rounds", rc.optimizer.adam_epsilon);
  }
  if (j.contains("channel")) {
    std::string name;
    Read(j, "channel", "", name);
    c.channel = ParseChannel(name);
  }
  Read(j, "noise_sigma", "", c.noise_sigma);
  Read(j, "mixer_buffer_size", "", c.mixer_buffer_size);
  if (j.contains("attack")) {
    const json& a = j.at("attack");
    CheckKeys(a, "attack",
              {"aux_ratio", "reference_rounds", "multi_round_accumulation",
               "rebuild_each_round", "passive", "active", "attack_rounds",
               "ground_truth"});
    Read(a, "aux_ratio", "attack", c.attack.aux_ratio);
    Read(a, "reference_rounds", "attack", c.attack.reference_rounds);
    Read(a, "multi_round_accumulation", "attack",
         c.attack.multi_round_accumulation);
    Read(a, "rebuild_each_round", "attack", c.attack.rebuild_each_round);
    Read(a, "passive", "attack", c.passive_attack);
    Read(a, "active", "attack", c.active_attack);
    Read(a, "attack_rounds", "attack", c.attack_rounds);
    if (a.contains("ground_truth")) {
      std::string rule;
      Read(a, "ground_truth", "attack", rule);
      c.ground_truth = attack::ParseGroundTruthRule(rule);
    }
  }
  Read(j, "repetitions", "", c.repetitions);
  Read(j, "folds", "", c.folds);
  Read(j, "master_seed", "", c.master_seed);
  Read(j, "output_path", "", c.output_path);
  Read(j, "trace_path", "", c.trace_path);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path,
                            const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return ConfigFromJson(j, base);
}

}  // namespace mixnn::harness
