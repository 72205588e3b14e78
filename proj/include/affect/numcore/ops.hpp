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
#include <vector>

#include "affect/numcore/tape.hpp"

/// Differentiable operations on tape variables. Every op checks shapes and
/// throws DimensionError naming both operands on mismatch.
namespace affect::num {

Var matmul(Var a, Var b);
/// a * b^T
Var matmul_nt(Var a, Var b);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var tanh(Var a);
Var sigmoid(Var a);

/// x (n x k) * w^T (k x m) + b^T broadcast over rows, with b shaped (m x 1).
Var linear(Var x, Var w, Var b);

/// Columns [start, start + count).
Var slice_cols(Var x, std::size_t start, std::size_t count);
Var concat_cols(std::span<const Var> parts);
/// Row i of the result is row indices[i] of x.
Var gather_rows(Var x, std::span<const std::size_t> indices);
/// Sum of a non-empty list of same-shape variables.
Var sum(std::span<const Var> parts);

/**
 * Fused LSTM cell step. hc_prev is [h_prev | c_prev] (batch x 2H); w is (4H x in),
 * u is (4H x H), b is (4H x 1) with gates stacked as input, forget, output,
 * candidate. Returns [h | c] (batch x 2H).
 */
Var lstm_cell(Var x, Var hc_prev, Var w, Var u, Var b);

/// 1x1 sum of squared entries.
Var sum_squares(Var a);
/// 1x1 mean of squared differences over all entries.
Var mse(Var pred, Var target);

}  // namespace affect::num
