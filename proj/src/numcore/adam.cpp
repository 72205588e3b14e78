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

#include "affect/numcore/adam.hpp"

#include <cmath>

#include "affect/errors.hpp"

namespace affect::num {

AdamState::AdamState(const ParamStore& store, AdamConfig config) : config_(config) {
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0 && config.beta2 >= 0.0 && config.beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(config.lr > 0.0) || !(config.eps > 0.0)) throw ConfigError("Adam lr and eps must be > 0");
  for (const auto& e : store) {
    names_.push_back(e.name);
    m_.emplace_back(e.param->value.rows(), e.param->value.cols());
    v_.emplace_back(e.param->value.rows(), e.param->value.cols());
  }
}

void adam_step(ParamStore& store, AdamState& state) {
  if (store.size() != state.names_.size()) {
    throw ContractError("Adam state tracks " + std::to_string(state.names_.size()) +
                        " parameters but the store holds " + std::to_string(store.size()));
  }
  for (std::size_t k = 0; k < store.size(); ++k) {
    const auto& e = store[k];
    if (e.name != state.names_[k]) {
      throw ContractError("Adam state entry " + state.names_[k] + " does not match " + e.name);
    }
    if (!e.param->grad.same_shape(e.param->value) || !state.m_[k].same_shape(e.param->value)) {
      throw ContractError("missing or misshapen gradient for parameter " + e.name);
    }
    if (!e.param->grad.all_finite()) throw NumericError("non-finite gradient for " + e.name);
  }

  const AdamConfig& c = state.config_;
  state.t_ += 1;
  const double t = static_cast<double>(state.t_);
  const double corr1 = 1.0 - std::pow(c.beta1, t);
  const double corr2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < store.size(); ++k) {
    Param& p = *store[k].param;
    auto theta = p.value.data();
    auto g = p.grad.data();
    auto m = state.m_[k].data();
    auto v = state.v_[k].data();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / corr1;
      const double v_hat = v[i] / corr2;
      theta[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
    p.grad.fill(0.0);
  }
}

}  // namespace affect::num
