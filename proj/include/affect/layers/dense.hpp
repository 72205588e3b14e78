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
#include <string>
#include <vector>

#include "affect/numcore/param.hpp"
#include "affect/numcore/rng.hpp"
#include "affect/numcore/tape.hpp"

namespace affect::layers {

enum class Activation { identity, tanh };

/// y = activation(W x + b) with W shaped (out x in) and b shaped (out x 1).
struct DenseLayer {
  num::Param weight;
  num::Param bias;
  Activation activation = Activation::identity;

  /// Weights uniform in +-1/sqrt(in), zero bias.
  static DenseLayer create(std::size_t in, std::size_t out, Activation activation, num::Rng& rng);
  static DenseLayer zeros(std::size_t in, std::size_t out, Activation activation);

  std::size_t in() const noexcept { return weight.value.cols(); }
  std::size_t out() const noexcept { return weight.value.rows(); }

  void collect(num::ParamStore& store, const std::string& prefix);
};

/// Batched forward: x is (batch x in), the result is (batch x out).
num::Var dense_forward(const num::Binding& bind, const DenseLayer& layer, num::Var x);

/// Single-vector forward without recording gradients.
std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x);

}  // namespace affect::layers
