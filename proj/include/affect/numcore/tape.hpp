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
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "affect/numcore/param.hpp"
#include "affect/numcore/tensor.hpp"

namespace affect::num {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid until the tape is cleared.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  const Tensor2& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/**
 * Dynamic reverse-mode tape.
 *
 * Nodes are appended in evaluation order, so a reverse sweep visits every node
 * after all of its consumers. Gradients are only allocated and propagated for
 * nodes that depend on a trainable leaf.
 */
class Tape {
 public:
  /// Receives the node's own id and output gradient; accumulates into parent gradients.
  using BackwardFn = std::function<void(Tape&, std::size_t self, const Tensor2& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor2 value);
  /// Differentiable leaf for a parameter. Repeated calls return the same node.
  Var param(const Param& p);
  /// Non-differentiable leaf holding a parameter's current value.
  Var frozen(const Param& p);

  /// Appends an op node. The node needs a gradient iff any parent does.
  Var record(Tensor2 value, std::initializer_list<Var> parents, BackwardFn backward);
  Var record(Tensor2 value, const std::vector<Var>& parents, BackwardFn backward);

  const Tensor2& value(std::size_t id) const { return nodes_[id].value; }
  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  /// Gradient buffer of a node, zero-allocated on first access.
  Tensor2& grad(std::size_t id);
  /// Gradient of a node after backward(); empty if it never received one.
  const Tensor2& grad_of(Var v) const { return nodes_[v.id()].grad; }

  /// Reverse sweep from a 1x1 root.
  void backward(Var root);
  /// Adds leaf gradients of every parameter in the store that was bound with param().
  void accumulate_into(ParamStore& store) const;
  /// Gradient recorded for a bound parameter (empty tensor if unbound or untouched).
  const Tensor2* param_grad(const Param& p) const;

  void clear();
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor2 value;
    Tensor2 grad;
    BackwardFn backward;
    bool needs_grad = false;
  };

  Var push(Node node);

  std::vector<Node> nodes_;
  std::unordered_map<const Param*, std::size_t> param_nodes_;
  std::unordered_map<const Param*, std::size_t> frozen_nodes_;
};

/**
 * Decides, per parameter, whether a forward pass binds it as a trainable leaf or
 * as a frozen constant.
 */
class Binding {
 public:
  /// Every parameter trainable.
  explicit Binding(Tape& tape) : tape_(&tape) {}
  /// Only parameters in the set are trainable.
  Binding(Tape& tape, const std::unordered_set<const Param*>& trainable)
      : tape_(&tape), trainable_(&trainable) {}

  static Binding inference(Tape& tape) {
    Binding b(tape);
    b.all_frozen_ = true;
    return b;
  }

  Var operator()(const Param& p) const;
  Tape& tape() const { return *tape_; }

 private:
  Tape* tape_;
  const std::unordered_set<const Param*>* trainable_ = nullptr;
  bool all_frozen_ = false;
};

inline const Tensor2& Var::value() const { return tape_->value(id_); }

}  // namespace affect::num
