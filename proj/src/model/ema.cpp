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

#include "affect/model/ema.hpp"

#include "affect/errors.hpp"

namespace affect::model {

namespace {
void check_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("EMA decay must lie in [0, 1)");
}
}  // namespace

std::vector<double> ema_smooth(std::span<const double> raw, double beta, double init) {
  check_beta(beta);
  std::vector<double> out;
  out.reserve(raw.size());
  double ema = init;
  for (double y : raw) {
    ema = y + beta * (ema - y);
    out.push_back(ema);
  }
  return out;
}

std::vector<double> ema_smooth(std::span<const double> raw, double beta) {
  if (raw.empty()) {
    check_beta(beta);
    return {};
  }
  return ema_smooth(raw, beta, raw.front());
}

EmaSmoother::EmaSmoother(double beta) : beta_(beta) { check_beta(beta); }

double EmaSmoother::push(double y) {
  if (!started_) {
    started_ = true;
    state_ = y;
  } else {
    state_ = y + beta_ * (state_ - y);
  }
  return state_;
}

}  // namespace affect::model
