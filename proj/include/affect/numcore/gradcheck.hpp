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
#include <string>

#include "affect/numcore/param.hpp"
#include "affect/numcore/tape.hpp"

namespace affect::num {

/// Builds a 1x1 loss on the given tape, binding parameters with Tape::param.
using LossFn = std::function<Var(Tape&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/**
 * Compares the tape gradient of every scalar in the store against a central
 * difference with perturbation eps. Relative error per entry is
 * |a - n| / max(|a|, |n|, 1e-12). Parameter values are restored afterwards and
 * gradients are left zeroed.
 */
GradCheckResult grad_check_detailed(const LossFn& loss_fn, ParamStore& store, double eps);

inline double grad_check(const LossFn& loss_fn, ParamStore& store, double eps) {
  return grad_check_detailed(loss_fn, store, eps).max_rel_error;
}

}  // namespace affect::num
