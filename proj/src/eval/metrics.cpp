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

#include "affect/eval/metrics.hpp"

#include <cmath>
#include <string>

#include "affect/errors.hpp"

namespace affect::eval {

double mse(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) {
    throw ContractError("mse length mismatch: " + std::to_string(pred.size()) + " vs " +
                        std::to_string(gt.size()));
  }
  if (pred.empty()) throw ContractError("mse of empty sequences");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - gt[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

PccResult pcc(std::span<const double> pred, std::span<const double> gt) {
  if (pred.size() != gt.size()) {
    throw ContractError("pcc length mismatch: " + std::to_string(pred.size()) + " vs " +
                        std::to_string(gt.size()));
  }
  if (pred.size() < 2) throw ContractError("pcc needs at least two samples");
  const double n = static_cast<double>(pred.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    mx += pred[i];
    my += gt[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dx = pred[i] - mx;
    const double dy = gt[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx / n < 1e-15 || syy / n < 1e-15) return {0.0, true};
  return {sxy / std::sqrt(sxx * syy), false};
}

std::vector<double> expand_per_second(std::span<const double> clip_values,
                                      std::size_t clip_seconds) {
  std::vector<double> out;
  out.reserve(clip_values.size() * clip_seconds);
  for (double v : clip_values) out.insert(out.end(), clip_seconds, v);
  return out;
}

}  // namespace affect::eval
