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

#include "affect/layers/dense.hpp"

#include <cmath>

#include "affect/errors.hpp"
#include "affect/numcore/ops.hpp"

namespace affect::layers {

DenseLayer DenseLayer::create(std::size_t in, std::size_t out, Activation activation,
                              num::Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  num::Tensor2 w(out, in);
  for (double& v : w.data()) v = rng.uniform(-bound, bound);
  return DenseLayer{num::Param(std::move(w)), num::Param(num::Tensor2(out, 1)), activation};
}

DenseLayer DenseLayer::zeros(std::size_t in, std::size_t out, Activation activation) {
  return DenseLayer{num::Param(num::Tensor2(out, in)), num::Param(num::Tensor2(out, 1)),
                    activation};
}

void DenseLayer::collect(num::ParamStore& store, const std::string& prefix) {
  store.add(prefix + ".W", weight);
  store.add(prefix + ".b", bias);
}

num::Var dense_forward(const num::Binding& bind, const DenseLayer& layer, num::Var x) {
  num::Var y = num::linear(x, bind(layer.weight), bind(layer.bias));
  return layer.activation == Activation::tanh ? num::tanh(y) : y;
}

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x) {
  if (x.size() != layer.in()) {
    throw DimensionError("dense input length " + std::to_string(x.size()) +
                         " does not match weight " + layer.weight.value.shape_str());
  }
  num::Tape tape;
  num::Var out = dense_forward(num::Binding::inference(tape), layer,
                               tape.constant(num::Tensor2::row_vector(x)));
  auto v = out.value().data();
  return {v.begin(), v.end()};
}

}  // namespace affect::layers
