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

#include "affect/numcore/tensor.hpp"

#include <cmath>

#include "affect/errors.hpp"

namespace affect::num {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str());
  }
}

Tensor2 Tensor2::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor2(r, c, std::move(data));
}

Tensor2 Tensor2::identity(std::size_t n) {
  Tensor2 t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

Tensor2 Tensor2::column(std::span<const double> values) {
  return Tensor2(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Tensor2 Tensor2::row_vector(std::span<const double> values) {
  return Tensor2(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

std::string Tensor2::shape_str() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

bool Tensor2::all_finite() const noexcept {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor2::fill(double v) {
  for (double& x : data_) x = v;
}

Tensor2 Tensor2::transposed() const {
  Tensor2 t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch: " + a.shape_str() + " * " + b.shape_str());
  }
  Tensor2 c(a.rows(), b.cols());
  kernels::gemm_nn(a, b, c);
  return c;
}

namespace kernels {

void gemm_nn(const Tensor2& a, const Tensor2& b, Tensor2& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = pc + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = pa[i * k + p];
      if (av == 0.0) continue;
      const double* brow = pb + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

void gemm_nt(const Tensor2& a, const Tensor2& b, Tensor2& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = pa + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const double* brow = pb + j * k;
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += arow[p] * brow[p];
      pc[i * m + j] += s;
    }
  }
}

void gemm_tn(const Tensor2& a, const Tensor2& b, Tensor2& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  for (std::size_t r = 0; r < n; ++r) {
    const double* arow = pa + r * k;
    const double* brow = pb + r * m;
    for (std::size_t i = 0; i < k; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = pc + i * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace kernels
}  // namespace affect::num
