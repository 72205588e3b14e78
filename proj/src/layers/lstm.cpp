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

#include "affect/layers/lstm.hpp"

#include <cmath>

#include "affect/errors.hpp"
#include "affect/numcore/ops.hpp"

namespace affect::layers {

using num::Tensor2;
using num::Var;

LstmCell LstmCell::create(std::size_t input, std::size_t hidden, num::Rng& rng) {
  LstmCell cell = zeros(input, hidden);
  const double wb = 1.0 / std::sqrt(static_cast<double>(input));
  const double ub = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& v : cell.w.value.data()) v = rng.uniform(-wb, wb);
  for (double& v : cell.u.value.data()) v = rng.uniform(-ub, ub);
  for (std::size_t j = hidden; j < 2 * hidden; ++j) cell.b.value(j, 0) = 1.0;
  return cell;
}

LstmCell LstmCell::zeros(std::size_t input, std::size_t hidden) {
  return LstmCell{num::Param(Tensor2(4 * hidden, input)), num::Param(Tensor2(4 * hidden, hidden)),
                  num::Param(Tensor2(4 * hidden, 1))};
}

void LstmCell::collect(num::ParamStore& store, const std::string& prefix) {
  store.add(prefix + ".W", w);
  store.add(prefix + ".U", u);
  store.add(prefix + ".b", b);
}

LstmState lstm_step(const num::Binding& bind, const LstmCell& cell, Var x, Var h_prev,
                    Var c_prev) {
  const std::size_t H = cell.hidden();
  if (h_prev.cols() != H || c_prev.cols() != H || h_prev.rows() != x.rows() ||
      c_prev.rows() != x.rows()) {
    throw DimensionError("lstm state shapes " + h_prev.value().shape_str() + "/" +
                         c_prev.value().shape_str() + " do not fit batch " +
                         x.value().shape_str() + " with hidden " + std::to_string(H));
  }
  const std::array<Var, 2> parts{h_prev, c_prev};
  Var hc = num::lstm_cell(x, num::concat_cols(parts), bind(cell.w), bind(cell.u), bind(cell.b));
  return {num::slice_cols(hc, 0, H), num::slice_cols(hc, H, H)};
}

BiLstmStack BiLstmStack::create(std::size_t input, std::size_t hidden, num::Rng& rng) {
  BiLstmStack s;
  s.layers[0].forward = LstmCell::create(input, hidden, rng);
  s.layers[0].backward = LstmCell::create(input, hidden, rng);
  s.layers[1].forward = LstmCell::create(2 * hidden, hidden, rng);
  s.layers[1].backward = LstmCell::create(2 * hidden, hidden, rng);
  return s;
}

BiLstmStack BiLstmStack::zeros(std::size_t input, std::size_t hidden) {
  BiLstmStack s;
  s.layers[0] = {LstmCell::zeros(input, hidden), LstmCell::zeros(input, hidden)};
  s.layers[1] = {LstmCell::zeros(2 * hidden, hidden), LstmCell::zeros(2 * hidden, hidden)};
  return s;
}

void BiLstmStack::collect(num::ParamStore& store, const std::string& prefix) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string p = prefix + ".l" + std::to_string(l);
    layers[l].forward.collect(store, p + ".fw");
    layers[l].backward.collect(store, p + ".bw");
  }
}

namespace {

// Hidden states indexed by time, for one direction.
std::vector<Var> run_direction(const num::Binding& bind, const LstmCell& cell,
                               std::span<const Var> xs, bool reverse) {
  const std::size_t T = xs.size();
  const std::size_t batch = xs[0].rows();
  num::Tape& tape = bind.tape();
  const std::size_t H = cell.hidden();
  Var hc = tape.constant(Tensor2(batch, 2 * H));
  Var w = bind(cell.w), u = bind(cell.u), b = bind(cell.b);
  std::vector<Var> hs(T);
  for (std::size_t k = 0; k < T; ++k) {
    const std::size_t t = reverse ? T - 1 - k : k;
    hc = num::lstm_cell(xs[t], hc, w, u, b);
    hs[t] = num::slice_cols(hc, 0, H);
  }
  return hs;
}

}  // namespace

BiLstmOutput bilstm_run(const num::Binding& bind, const BiLstmStack& stack,
                        std::span<const Var> steps) {
  if (steps.empty()) throw InputError("bilstm over an empty sequence");
  for (const Var& x : steps) {
    if (x.cols() != stack.input()) {
      throw DimensionError("bilstm step width " + std::to_string(x.cols()) +
                           " does not match stack input " + std::to_string(stack.input()));
    }
  }
  std::vector<Var> current(steps.begin(), steps.end());
  std::vector<Var> fw, bw;
  for (const BiLstmLayer& layer : stack.layers) {
    fw = run_direction(bind, layer.forward, current, false);
    bw = run_direction(bind, layer.backward, current, true);
    for (std::size_t t = 0; t < current.size(); ++t) {
      const std::array<Var, 2> pair{fw[t], bw[t]};
      current[t] = num::concat_cols(pair);
    }
  }
  const std::array<Var, 2> finals{fw.back(), bw.front()};
  return {std::move(current), num::concat_cols(finals)};
}

Var bilstm_encode(const num::Binding& bind, const BiLstmStack& stack, std::span<const Var> steps) {
  return bilstm_run(bind, stack, steps).encoding;
}

std::vector<double> bilstm_encode(const BiLstmStack& stack, const Tensor2& sequence) {
  if (sequence.rows() == 0) throw InputError("bilstm over an empty sequence");
  if (sequence.cols() != stack.input()) {
    throw DimensionError("sequence width " + std::to_string(sequence.cols()) +
                         " does not match stack input " + std::to_string(stack.input()));
  }
  num::Tape tape;
  std::vector<Var> steps;
  for (std::size_t t = 0; t < sequence.rows(); ++t) {
    steps.push_back(tape.constant(Tensor2::row_vector(sequence.row(t))));
  }
  Var enc = bilstm_encode(num::Binding::inference(tape), stack, steps);
  auto v = enc.value().data();
  return {v.begin(), v.end()};
}

}  // namespace affect::layers
