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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "affect/datapack/pack.hpp"
#include "affect/model/intra_clip.hpp"
#include "affect/numcore/adam.hpp"

namespace affect::train {

enum class RankMetric { mse, pcc };

struct TrainConfig {
  data::Task task = data::Task::valence;
  std::size_t clip_seconds = 10;
  /// Clips per context window for valence.
  std::size_t window = 4;
  /// EMA decay for arousal.
  double beta = 0.99;
  num::AdamConfig adam;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  /// Fraction of movies held out for validation and early stopping.
  double val_fraction = 0.2;
  RankMetric rank_metric = RankMetric::mse;
  std::uint64_t seed = 0;
  model::ModelDims dims;
  /// Modalities to train on; empty means every modality in the packs.
  std::vector<std::string> modalities;

  void validate() const;
};

/**
 * JSON form. Keys: task, clip_seconds, window, beta, adam {lr, beta1, beta2, eps},
 * batch_size, max_epochs, patience, val_fraction, rank_metric ("mse"|"pcc"),
 * seed, hidden, embedding, context_hidden, modalities. Missing keys keep their
 * defaults; unknown keys raise ConfigError.
 */
TrainConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const TrainConfig& config);
TrainConfig load_config(const std::filesystem::path& path);

}  // namespace affect::train
