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

#include <span>
#include <vector>

namespace affect::model {

/**
 * Exponential moving average over clip-level predictions:
 *
 *   ema_i = beta * ema_{i-1} + (1 - beta) * y_i,   ema_0 = init
 *
 * evaluated as y_i + beta * (ema_{i-1} - y_i), which makes beta = 0 and a
 * constant input equal to init exact fixed points.
 */
std::vector<double> ema_smooth(std::span<const double> raw, double beta, double init);

/// Starts the average at the first raw prediction, so output[0] == raw[0].
std::vector<double> ema_smooth(std::span<const double> raw, double beta);

/// Streaming form of the same recurrence.
class EmaSmoother {
 public:
  explicit EmaSmoother(double beta);

  double beta() const noexcept { return beta_; }
  /// The first call seeds the state with y.
  double push(double y);
  void reset() { started_ = false; }

 private:
  double beta_;
  double state_ = 0.0;
  bool started_ = false;
};

}  // namespace affect::model
