/*
 * Copyright (c) 2026, The affect authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "affect/training/config.hpp"

#include <fstream>
#include <set>

#include "affect/errors.hpp"

namespace affect::train {

void TrainConfig::validate() const {
  if (clip_seconds == 0) throw ConfigError("clip_seconds must be positive");
  if (window == 0) throw ConfigError("window must be at least 1");
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw ConfigError("val_fraction must lie in [0, 1)");
  }
  if (dims.hidden == 0 || dims.embedding == 0 || dims.context_hidden == 0) {
    throw ConfigError("layer widths must be positive");
  }
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(adam.lr > 0.0 && adam.eps > 0.0)) throw ConfigError("adam lr and eps must be positive");
  std::set<std::string> seen;
  for (const auto& m : modalities) {
    if (!seen.insert(m).second) throw ConfigError("modality listed twice: " + m);
  }
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) {
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for config key '") + key + "'");
  }
}

}  // namespace

TrainConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"task", "clip_seconds", "window", "beta", "adam", "batch_size", "max_epochs",
                  "patience", "val_fraction", "rank_metric", "seed", "hidden", "embedding",
                  "context_hidden", "modalities"},
                 "config");
  TrainConfig c;
  std::string task = data::to_string(c.task);
  read(j, "task", task);
  try {
    c.task = data::parse_task(task);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  read(j, "clip_seconds", c.clip_seconds);
  read(j, "window", c.window);
  read(j, "beta", c.beta);
  if (j.contains("adam")) {
    const auto& a = j.at("adam");
    if (!a.is_object()) throw ConfigError("adam must be an object");
    reject_unknown(a, {"lr", "beta1", "beta2", "eps"}, "adam");
    read(a, "lr", c.adam.lr);
    read(a, "beta1", c.adam.beta1);
    read(a, "beta2", c.adam.beta2);
    read(a, "eps", c.adam.eps);
  }
  read(j, "batch_size", c.batch_size);
  read(j, "max_epochs", c.max_epochs);
  read(j, "patience", c.patience);
  read(j, "val_fraction", c.val_fraction);
  std::string metric = "mse";
  read(j, "rank_metric", metric);
  if (metric == "mse") {
    c.rank_metric = RankMetric::mse;
  } else if (metric == "pcc") {
    c.rank_metric = RankMetric::pcc;
  } else {
    throw ConfigError("rank_metric must be mse or pcc");
  }
  read(j, "seed", c.seed);
  read(j, "hidden", c.dims.hidden);
  read(j, "embedding", c.dims.embedding);
  read(j, "context_hidden", c.dims.context_hidden);
  read(j, "modalities", c.modalities);
  c.validate();
  return c;
}

nlohmann::json config_to_json(const TrainConfig& c) {
  nlohmann::json j;
  j["task"] = data::to_string(c.task);
  j["clip_seconds"] = c.clip_seconds;
  j["window"] = c.window;
  j["beta"] = c.beta;
  j["adam"] = {{"lr", c.adam.lr}, {"beta1", c.adam.beta1}, {"beta2", c.adam.beta2},
               {"eps", c.adam.eps}};
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["val_fraction"] = c.val_fraction;
  j["rank_metric"] = c.rank_metric == RankMetric::mse ? "mse" : "pcc";
  j["seed"] = c.seed;
  j["hidden"] = c.dims.hidden;
  j["embedding"] = c.dims.embedding;
  j["context_hidden"] = c.dims.context_hidden;
  j["modalities"] = c.modalities;
  return j;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace affect::train
