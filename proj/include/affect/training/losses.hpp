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

#include "affect/numcore/tensor.hpp"

namespace affect::train {

/// (1/m) sum_j (y_j - G_j)^2 over a batch of m clips.
double clip_loss(std::span<const double> predictions, std::span<const double> labels);

/// (1/(m L)) sum_j sum_i (y_j^i - G_j^i)^2 over m windows of L clips (rows = windows).
double window_loss(const num::Tensor2& predictions, const num::Tensor2& labels);

}  // namespace affect::train
