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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace affect::num {

/** Dense row-major matrix of doubles. Value-semantic. */
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor2 identity(std::size_t n);
  /// n x 1 column vector.
  static Tensor2 column(std::span<const double> values);
  /// 1 x n row vector.
  static Tensor2 row_vector(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  bool same_shape(const Tensor2& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string shape_str() const;
  bool all_finite() const noexcept;
  void fill(double v);

  Tensor2 transposed() const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Tensor2 matmul(const Tensor2& a, const Tensor2& b);

// Accumulating kernels; callers check shapes.
namespace kernels {
/// c += a * b
void gemm_nn(const Tensor2& a, const Tensor2& b, Tensor2& c);
/// c += a * b^T
void gemm_nt(const Tensor2& a, const Tensor2& b, Tensor2& c);
/// c += a^T * b
void gemm_tn(const Tensor2& a, const Tensor2& b, Tensor2& c);
}  // namespace kernels

}  // namespace affect::num
