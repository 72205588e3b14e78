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

#include "affect/training/losses.hpp"

#include <string>

#include "affect/errors.hpp"

namespace affect::train {

double clip_loss(std::span<const double> predictions, std::span<const double> labels) {
  if (predictions.size() != labels.size() || labels.empty()) {
    throw ContractError("clip_loss expects equal non-empty lengths, got " +
                        std::to_string(predictions.size()) + " and " +
                        std::to_string(labels.size()));
  }
  double s = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const double d = predictions[j] - labels[j];
    s += d * d;
  }
  return s / static_cast<double>(labels.size());
}

double window_loss(const num::Tensor2& predictions, const num::Tensor2& labels) {
  if (!predictions.same_shape(labels) || labels.empty()) {
    throw ContractError("window_loss shape mismatch: " + predictions.shape_str() + " vs " +
                        labels.shape_str());
  }
  return clip_loss(predictions.data(), labels.data());
}

}  // namespace affect::train
