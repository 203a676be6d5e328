// autodiff/tensor.cc

// Copyright 2026  The BargeBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bargebench/autodiff/tensor.h"

#include <cmath>
#include <unordered_set>
#include <utility>

#include "bargebench/common/error.h"

namespace bargebench::ad {

size_t NumElements(const Shape &shape) {
  size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension in " + ShapeString(shape));
    n *= static_cast<size_t>(d);
  }
  return n;
}

std::string ShapeString(const Shape &shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::vector<double> &Node::Grad() {
  if (grad.empty()) grad.assign(value.size(), 0.0);
  return grad;
}

namespace {

Tensor Leaf(Shape shape, std::vector<double> values, bool requires_grad) {
  if (NumElements(shape) != values.size())
    throw ShapeError("shape " + ShapeString(shape) + " needs " +
                     std::to_string(NumElements(shape)) + " values, got " +
                     std::to_string(values.size()));
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(values);
  n->requires_grad = requires_grad;
  return Tensor(std::move(n));
}

}  // namespace

Tensor Tensor::Constant(Shape shape, std::vector<double> values) {
  return Leaf(std::move(shape), std::move(values), false);
}

Tensor Tensor::Parameter(Shape shape, std::vector<double> values) {
  return Leaf(std::move(shape), std::move(values), true);
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  size_t n = NumElements(shape);
  return Leaf(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::FromOp(Shape shape, std::vector<double> value,
                      std::vector<Tensor> parents,
                      std::function<void(Node &)> backward) {
  for (double v : value)
    if (!std::isfinite(v))
      throw NumericError("op produced a non-finite value in a tensor of shape " +
                         ShapeString(shape));
  Tensor out = Leaf(std::move(shape), std::move(value), false);
  for (const Tensor &p : parents)
    if (p.requires_grad()) out.node_->requires_grad = true;
  if (out.node_->requires_grad) {
    out.node_->parents.reserve(parents.size());
    for (Tensor &p : parents) out.node_->parents.push_back(p.node_);
    out.node_->backward = std::move(backward);
  }
  return out;
}

double Tensor::item() const {
  if (size() != 1)
    throw ShapeError("item() on tensor of shape " + ShapeString(shape()));
  return node_->value[0];
}

std::vector<double> Tensor::grad() const {
  if (node_->grad.empty()) return std::vector<double>(node_->value.size(), 0.0);
  return node_->grad;
}

void Backward(const Tensor &out, double seed) {
  if (out.size() != 1)
    throw ShapeError("Backward needs a single-element output, got " +
                     ShapeString(out.shape()));
  if (!out.requires_grad()) return;
  // Iterative post-order DFS gives a topological order.
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  std::vector<std::pair<Node *, size_t>> stack{{out.node(), 0}};
  seen.insert(out.node());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->parents.size()) {
      Node *p = node->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  // Interior gradients are scratch space for one pass; only leaves accumulate.
  for (Node *n : order)
    if (!n->parents.empty()) n->grad.clear();
  out.node()->Grad()[0] += seed;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *n = *it;
    if (n->backward && !n->grad.empty()) n->backward(*n);
  }
  for (Node *n : order)
    if (!n->parents.empty()) n->grad.clear();
}

}  // namespace bargebench::ad
