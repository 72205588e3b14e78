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

#include "affect/numcore/param.hpp"

namespace affect::num {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Moment estimates for every entry of one ParamStore, aligned by position and name.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const ParamStore& store, AdamConfig config);

  const AdamConfig& config() const noexcept { return config_; }
  std::uint64_t step_count() const noexcept { return t_; }

 private:
  friend void adam_step(ParamStore& store, AdamState& state);

  AdamConfig config_;
  std::uint64_t t_ = 0;
  std::vector<std::string> names_;
  std::vector<Tensor2> m_;
  std::vector<Tensor2> v_;
};

/**
 * One bias-corrected Adam update of every parameter in the store, then clears
 * all gradients. The step counter advances once per call.
 */
void adam_step(ParamStore& store, AdamState& state);

}  // namespace affect::num
