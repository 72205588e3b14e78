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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "affect/numcore/param.hpp"
#include "affect/numcore/rng.hpp"
#include "affect/numcore/tape.hpp"

namespace affect::layers {

/**
 * Standard LSTM cell with the four gates stacked row-wise in the order
 * input, forget, output, candidate:
 *
 *   z = W x + U h_prev + b          (4H)
 *   i = sigmoid(z[0:H])    f = sigmoid(z[H:2H])
 *   o = sigmoid(z[2H:3H])  g = tanh(z[3H:4H])
 *   c = f * c_prev + i * g
 *   h = o * tanh(c)
 */
struct LstmCell {
  num::Param w;  // 4H x input
  num::Param u;  // 4H x H
  num::Param b;  // 4H x 1

  /// Weights uniform in +-1/sqrt(fan_in); forget bias 1, other biases 0.
  static LstmCell create(std::size_t input, std::size_t hidden, num::Rng& rng);
  static LstmCell zeros(std::size_t input, std::size_t hidden);

  std::size_t input() const noexcept { return w.value.cols(); }
  std::size_t hidden() const noexcept { return u.value.cols(); }

  void collect(num::ParamStore& store, const std::string& prefix);
};

struct LstmState {
  num::Var h;
  num::Var c;
};

/// One time step for a batch: x is (batch x input), h_prev and c_prev are (batch x H).
LstmState lstm_step(const num::Binding& bind, const LstmCell& cell, num::Var x, num::Var h_prev,
                    num::Var c_prev);

struct BiLstmLayer {
  LstmCell forward;
  LstmCell backward;
};

/// Two stacked bidirectional layers; each step emits [forward h, backward h] (width 2H).
struct BiLstmStack {
  std::array<BiLstmLayer, 2> layers;

  static BiLstmStack create(std::size_t input, std::size_t hidden, num::Rng& rng);
  static BiLstmStack zeros(std::size_t input, std::size_t hidden);

  std::size_t input() const noexcept { return layers[0].forward.input(); }
  std::size_t hidden() const noexcept { return layers[0].forward.hidden(); }
  std::size_t output_width() const noexcept { return 2 * hidden(); }

  void collect(num::ParamStore& store, const std::string& prefix);
};

struct BiLstmOutput {
  /// Layer-2 output per time step, each (batch x 2H).
  std::vector<num::Var> steps;
  /// [layer-2 forward h at the last step, layer-2 backward h at the first step].
  num::Var encoding;
};

/// Runs the stack over a sequence of (batch x input) steps.
BiLstmOutput bilstm_run(const num::Binding& bind, const BiLstmStack& stack,
                        std::span<const num::Var> steps);

num::Var bilstm_encode(const num::Binding& bind, const BiLstmStack& stack,
                       std::span<const num::Var> steps);

/// Encodes one (T x D) sequence without recording gradients; returns 2H values.
std::vector<double> bilstm_encode(const BiLstmStack& stack, const num::Tensor2& sequence);

}  // namespace affect::layers
