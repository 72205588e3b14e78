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
#include <span>
#include <vector>

namespace affect::eval {

/// Mean of squared differences. Lengths must match and be non-zero.
double mse(std::span<const double> pred, std::span<const double> gt);

struct PccResult {
  double value = 0.0;
  /// Either input had variance below 1e-15; value is then 0.
  bool degenerate = false;
};

/// Pearson correlation, computed from centered sums. Requires at least two samples.
PccResult pcc(std::span<const double> pred, std::span<const double> gt);

/// Repeats each clip value clip_seconds times, preserving order.
std::vector<double> expand_per_second(std::span<const double> clip_values,
                                      std::size_t clip_seconds = 10);

}  // namespace affect::eval
