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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affect/datapack/pack.hpp"
#include "affect/training/checkpoint.hpp"
#include "affect/training/context_training.hpp"
#include "affect/training/progressive.hpp"

namespace affect::train {

using Logger = std::function<void(std::string_view)>;

struct PipelineResult {
  TrainedBundle bundle;
  Split split;
  std::map<std::string, Stage1Result> stage1;
  std::vector<std::string> ranking;
  std::vector<StepReport> steps;
  double intra_val_mse = 0.0;
  std::optional<double> context_val_mse;
};

/**
 * stage 1 for every modality -> rank -> progressive stage 2 -> fine-tune, then
 * (valence only) the context model.
 */
PipelineResult run_training(const std::vector<data::MoviePack>& packs, const TrainConfig& config,
                            const Logger& log = {});

/// Same, on an already segmented dataset.
PipelineResult run_training(const Dataset& ds, const TrainConfig& config, const Logger& log = {});

}  // namespace affect::train
