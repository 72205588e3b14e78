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
#include <functional>
#include <span>
#include <vector>

#include "affect/numcore/adam.hpp"
#include "affect/numcore/param.hpp"

namespace affect::train {

struct FitSettings {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  num::AdamConfig adam;
  std::uint64_t seed = 0;
};

struct FitResult {
  std::size_t epochs_run = 0;
  /// 0 means the initial parameters were never improved upon.
  std::size_t best_epoch = 0;
  double initial_metric = 0.0;
  double best_metric = 0.0;
  /// Monitored metric after each epoch.
  std::vector<double> history;
};

/// Runs forward and backward for a minibatch of item indices, accumulating gradients into the
/// trainable store; returns the batch loss.
using BatchLossFn = std::function<double(std::span<const std::size_t> items)>;
/// Metric to minimize for early stopping.
using MonitorFn = std::function<double()>;

/**
 * Minibatch Adam over a seeded per-epoch shuffle of n_items items. The monitor
 * is evaluated before training and after every epoch; training stops after
 * patience epochs without a strict improvement and the best parameters are
 * restored. Only parameters in the trainable store change.
 */
FitResult fit(num::ParamStore& trainable, std::size_t n_items, const BatchLossFn& batch_loss,
              const MonitorFn& monitor, const FitSettings& settings);

}  // namespace affect::train
