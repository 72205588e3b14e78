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

#include "affect/numcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "affect/errors.hpp"

namespace affect::num {

namespace {

double eval_loss(const LossFn& loss_fn) {
  Tape tape;
  Var out = loss_fn(tape);
  if (out.rows() != 1 || out.cols() != 1) throw ContractError("loss must be 1x1");
  const double v = out.value()(0, 0);
  if (!std::isfinite(v)) throw NumericError("loss is not finite");
  return v;
}

}  // namespace

GradCheckResult grad_check_detailed(const LossFn& loss_fn, ParamStore& store, double eps) {
  if (!(eps > 0.0)) throw ContractError("grad_check eps must be > 0");
  store.zero_grad();
  {
    Tape tape;
    Var out = loss_fn(tape);
    if (!std::isfinite(out.value()(0, 0))) throw NumericError("loss is not finite");
    tape.backward(out);
    tape.accumulate_into(store);
  }

  GradCheckResult result;
  for (const auto& e : store) {
    Param& p = *e.param;
    auto theta = p.value.data();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double saved = theta[i];
      theta[i] = saved + eps;
      const double up = eval_loss(loss_fn);
      theta[i] = saved - eps;
      const double down = eval_loss(loss_fn);
      theta[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = p.grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
      const double rel = std::abs(analytic - numeric) / denom;
      if (result.worst_param.empty() || rel > result.max_rel_error) {
        result = {rel, e.name, i, analytic, numeric};
      }
    }
  }
  store.zero_grad();
  return result;
}

}  // namespace affect::num
