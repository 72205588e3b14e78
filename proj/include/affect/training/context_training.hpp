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

#include "affect/model/context.hpp"
#include "affect/model/intra_clip.hpp"
#include "affect/training/config.hpp"
#include "affect/training/dataset.hpp"
#include "affect/training/fit.hpp"

namespace affect::train {

struct ContextResult {
  model::ContextModel context;
  /// Clip-level MSE of inference-mode valence predictions on the monitored movies.
  double val_mse = 0.0;
  FitResult fit;
};

/**
 * Trains the inter-clip valence model on stride-1 windows of config.window clips
 * over frozen clip embeddings. The intra-clip model is only read. Movies with
 * fewer clips than the window contribute one shorter window.
 */
ContextResult train_valence_context(const Dataset& ds, const Split& split,
                                    const model::IntraClipModel& intra,
                                    const TrainConfig& config);

}  // namespace affect::train
