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

#include "affect/numcore/param.hpp"

#include "affect/errors.hpp"

namespace affect::num {

void ParamStore::add(std::string name, Param& param) {
  if (index_.contains(name)) throw ContractError("duplicate parameter name: " + name);
  if (!param.grad.same_shape(param.value)) {
    throw DimensionError("parameter " + name + " gradient shape " + param.grad.shape_str() +
                         " differs from value shape " + param.value.shape_str());
  }
  index_.emplace(name, entries_.size());
  entries_.push_back({std::move(name), &param});
}

Param& ParamStore::at(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ContractError("unknown parameter: " + name);
  return *entries_[it->second].param;
}

const Param& ParamStore::at(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ContractError("unknown parameter: " + name);
  return *entries_[it->second].param;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.param->value.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) e.param->zero_grad();
}

std::vector<Tensor2> ParamStore::snapshot() const {
  std::vector<Tensor2> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.param->value);
  return out;
}

void ParamStore::restore(const std::vector<Tensor2>& values) {
  if (values.size() != entries_.size()) throw ContractError("snapshot size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].same_shape(entries_[i].param->value)) {
      throw DimensionError("snapshot shape mismatch for " + entries_[i].name);
    }
    entries_[i].param->value = values[i];
  }
}

}  // namespace affect::num
