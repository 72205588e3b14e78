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
#include <span>
#include <string>
#include <vector>

#include "affect/model/intra_clip.hpp"
#include "affect/training/config.hpp"
#include "affect/training/dataset.hpp"
#include "affect/training/fit.hpp"

namespace affect::train {

/// Clip-level validation metrics of one modality-specific model.
struct ModalityScore {
  std::string modality;
  double mse = 0.0;
  double pcc = 0.0;
};

struct Stage1Result {
  std::string modality;
  model::ModalityEncoder encoder;
  model::AuxHead head;
  double val_mse = 0.0;
  double val_pcc = 0.0;
  bool pcc_degenerate = false;
  /// MSE of predicting the mean training label on the monitored clips.
  double baseline_mse = 0.0;
  FitResult fit;

  ModalityScore score() const { return {modality, val_mse, val_pcc}; }
};

/**
 * Trains one modality's encoder with a fresh auxiliary head on clip MSE.
 * Metrics come from the validation movies, or from the training movies when the
 * split holds none out.
 */
Stage1Result train_stage1(const Dataset& ds, const Split& split, const std::string& modality,
                          const TrainConfig& config);

/// mse: ascending MSE; pcc: descending PCC; ties broken by modality name.
std::vector<std::string> rank_modalities(std::vector<ModalityScore> scores, RankMetric metric);

struct StepReport {
  std::string modality;
  double val_mse = 0.0;
  FitResult fit;
};

struct Stage2Result {
  model::IntraClipModel model;
  std::vector<StepReport> steps;
  /// Validation MSE of the finalized, fine-tuned model.
  double val_mse = 0.0;
  FitResult finetune;
};

/// Called with the step number (1-based) and the model after each progressive
/// step, and with step 0 before the first one.
using StepObserver = std::function<void(std::size_t step, const model::IntraClipModel& model)>;

/**
 * Residual progressive training. Step i adds the i-th ranked modality's encoder,
 * initialized from its stage-1 weights, and trains only that encoder plus an
 * auxiliary head on the sum of all encoders added so far; earlier encoders stay
 * frozen. Step 1 gets a fresh head, later steps continue from the previous
 * step's head. Afterwards the fusion layers (taken from the last head) are
 * attached and every parameter is fine-tuned.
 */
Stage2Result train_stage2_progressive(const Dataset& ds, const Split& split,
                                      const std::vector<std::string>& ranked,
                                      const std::map<std::string, Stage1Result>& stage1,
                                      const TrainConfig& config,
                                      const StepObserver& observer = {});

/// Clip-level predictions of fc2 over the given clips.
std::vector<double> predict_clips(const model::IntraClipModel& model,
                                  std::span<const data::ClipSample* const> clips);

/// Clips used for early stopping and reported validation metrics.
std::vector<const data::ClipSample*> monitor_clips(const Dataset& ds, const Split& split);

}  // namespace affect::train
