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

#include "affect/numcore/tape.hpp"

#include "affect/errors.hpp"

namespace affect::num {

Var Tape::push(Node node) {
  if (!node.value.all_finite()) {
    throw NumericError("non-finite value produced at tape node " + std::to_string(nodes_.size()));
  }
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor2 value) { return push(Node{std::move(value), {}, {}, false}); }

Var Tape::param(const Param& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  Var v = push(Node{p.value, {}, {}, true});
  param_nodes_.emplace(&p, v.id());
  return v;
}

Var Tape::frozen(const Param& p) {
  if (auto it = frozen_nodes_.find(&p); it != frozen_nodes_.end()) return Var(this, it->second);
  Var v = push(Node{p.value, {}, {}, false});
  frozen_nodes_.emplace(&p, v.id());
  return v;
}

Var Tape::record(Tensor2 value, std::initializer_list<Var> parents, BackwardFn backward) {
  bool needs = false;
  for (const Var& p : parents) needs = needs || nodes_[p.id()].needs_grad;
  return push(Node{std::move(value), {}, needs ? std::move(backward) : BackwardFn{}, needs});
}

Var Tape::record(Tensor2 value, const std::vector<Var>& parents, BackwardFn backward) {
  bool needs = false;
  for (const Var& p : parents) needs = needs || nodes_[p.id()].needs_grad;
  return push(Node{std::move(value), {}, needs ? std::move(backward) : BackwardFn{}, needs});
}

Tensor2& Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty()) n.grad = Tensor2(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(Var root) {
  if (root.rows() != 1 || root.cols() != 1) {
    throw ContractError("backward root must be 1x1, got " + root.value().shape_str());
  }
  if (!nodes_[root.id()].needs_grad) return;
  grad(root.id())(0, 0) = 1.0;
  for (std::size_t i = root.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.needs_grad || !n.backward || n.grad.empty()) continue;
    // Backward callbacks only touch parent gradients; nodes_ never reallocates here.
    const Tensor2& g = n.grad;
    n.backward(*this, i, g);
  }
}

void Tape::accumulate_into(ParamStore& store) const {
  for (const auto& e : store) {
    auto it = param_nodes_.find(e.param);
    if (it == param_nodes_.end()) continue;
    const Tensor2& g = nodes_[it->second].grad;
    if (g.empty()) continue;
    auto dst = e.param->grad.data();
    auto src = g.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

const Tensor2* Tape::param_grad(const Param& p) const {
  auto it = param_nodes_.find(&p);
  if (it == param_nodes_.end()) return nullptr;
  return &nodes_[it->second].grad;
}

void Tape::clear() {
  nodes_.clear();
  param_nodes_.clear();
  frozen_nodes_.clear();
}

Var Binding::operator()(const Param& p) const {
  if (all_frozen_) return tape_->frozen(p);
  if (trainable_ == nullptr || trainable_->contains(&p)) return tape_->param(p);
  return tape_->frozen(p);
}

}  // namespace affect::num
