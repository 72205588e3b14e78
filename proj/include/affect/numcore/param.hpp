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
#include <string>
#include <unordered_map>
#include <vector>

#include "affect/numcore/tensor.hpp"

namespace affect::num {

/// A trainable tensor and its gradient accumulator (always the same shape).
struct Param {
  Tensor2 value;
  Tensor2 grad;

  Param() = default;
  explicit Param(Tensor2 v) : value(std::move(v)), grad(value.rows(), value.cols()) {}

  void zero_grad() { grad = Tensor2(value.rows(), value.cols()); }
};

/**
 * Ordered name -> parameter registry.
 *
 * Entries point into the owning layers; the store does not own them, so a
 * store must be rebuilt after the model it was collected from is copied or
 * moved. Iteration order is insertion order.
 */
class ParamStore {
 public:
  struct Entry {
    std::string name;
    Param* param;
  };

  void add(std::string name, Param& param);

  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.contains(name); }

  std::size_t size() const noexcept { return entries_.size(); }
  /// Total number of scalar parameters.
  std::size_t scalar_count() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  void zero_grad();

  /// Deep copy of all values, in store order.
  std::vector<Tensor2> snapshot() const;
  void restore(const std::vector<Tensor2>& values);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace affect::num
