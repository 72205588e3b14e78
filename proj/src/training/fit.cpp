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

#include "affect/training/fit.hpp"

#include <cmath>
#include <numeric>

#include "affect/errors.hpp"
#include "affect/numcore/rng.hpp"

namespace affect::train {

FitResult fit(num::ParamStore& trainable, std::size_t n_items, const BatchLossFn& batch_loss,
              const MonitorFn& monitor, const FitSettings& settings) {
  if (n_items == 0) throw DataError("empty training split");
  if (settings.batch_size == 0) throw ConfigError("batch_size must be positive");

  num::AdamState adam(trainable, settings.adam);
  num::Rng rng = num::Rng(settings.seed).derive("shuffle");
  std::vector<std::size_t> order(n_items);
  std::iota(order.begin(), order.end(), std::size_t{0});

  FitResult result;
  result.initial_metric = monitor();
  result.best_metric = result.initial_metric;
  std::vector<num::Tensor2> best = trainable.snapshot();
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= settings.max_epochs; ++epoch) {
    for (std::size_t i = n_items; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t start = 0; start < n_items; start += settings.batch_size) {
      const std::size_t len = std::min(settings.batch_size, n_items - start);
      trainable.zero_grad();
      const double loss = batch_loss(std::span(order).subspan(start, len));
      if (!std::isfinite(loss)) throw NumericError("training loss became non-finite");
      num::adam_step(trainable, adam);
    }
    const double metric = monitor();
    result.history.push_back(metric);
    result.epochs_run = epoch;
    if (metric < result.best_metric) {
      result.best_metric = metric;
      result.best_epoch = epoch;
      best = trainable.snapshot();
      stale = 0;
    } else if (++stale >= settings.patience) {
      break;
    }
  }
  trainable.restore(best);
  trainable.zero_grad();
  return result;
}

}  // namespace affect::train
