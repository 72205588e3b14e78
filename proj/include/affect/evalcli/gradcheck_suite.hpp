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

#include <cstdint>
#include <string>
#include <vector>

namespace affect::eval {

inline constexpr double kGradCheckEps = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-4;

struct GradCheckCase {
  std::string name;
  double max_rel_error = 0.0;
  std::string worst_param;

  bool passed() const { return max_rel_error < kGradCheckTolerance; }
};

/**
 * Finite-difference checks of every trainable path: dense layer, LSTM step,
 * two-layer BiLSTM over 5 steps, a two-modality intra-clip model with its
 * fusion head, and the valence context model over 2-clip windows.
 */
std::vector<GradCheckCase> run_gradcheck_suite(std::uint64_t seed);

}  // namespace affect::eval
