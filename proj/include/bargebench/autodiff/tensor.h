// autodiff/tensor.h

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

// Dense row-major tensors recorded on an implicit tape.  Every op output
// keeps shared ownership of its inputs and a closure that pushes its gradient
// back to them; Backward() walks that graph in reverse topological order.

#ifndef BARGEBENCH_AUTODIFF_TENSOR_H_
#define BARGEBENCH_AUTODIFF_TENSOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bargebench::ad {

using Shape = std::vector<int>;

size_t NumElements(const Shape &shape);
std::string ShapeString(const Shape &shape);

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  /// Reads this->grad, accumulates into parents' grads.
  std::function<void(Node &)> backward;

  std::vector<double> &Grad();  // allocates zeros on first use
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  /// Leaf tensor.  Throws ShapeError if values.size() mismatches the shape.
  static Tensor Constant(Shape shape, std::vector<double> values);
  static Tensor Parameter(Shape shape, std::vector<double> values);
  static Tensor Zeros(Shape shape, bool requires_grad = false);

  /// Builds an op output.  requires_grad is inherited from the parents; the
  /// backward closure is dropped when no parent needs a gradient.
  static Tensor FromOp(Shape shape, std::vector<double> value,
                       std::vector<Tensor> parents,
                       std::function<void(Node &)> backward);

  bool defined() const { return node_ != nullptr; }
  const Shape &shape() const { return node_->shape; }
  int dim(size_t i) const { return node_->shape.at(i); }
  size_t rank() const { return node_->shape.size(); }
  size_t size() const { return node_->value.size(); }
  const std::vector<double> &value() const { return node_->value; }
  std::vector<double> &mutable_value() { return node_->value; }
  double item() const;  // single-element tensors only
  double at(size_t i) const { return node_->value[i]; }
  bool requires_grad() const { return node_->requires_grad; }

  /// Gradient (zeros if nothing was accumulated).
  std::vector<double> grad() const;
  void ZeroGrad() { node_->grad.clear(); }
  std::vector<double> &mutable_grad() { return node_->Grad(); }

  Node *node() const { return node_.get(); }
  const std::shared_ptr<Node> &shared() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

/// Reverse pass from a single-element tensor, seeding d(out)/d(out) = seed.
/// Leaf gradients accumulate across calls (callers zero them between steps);
/// interior gradients are cleared before and after each pass.
void Backward(const Tensor &out, double seed = 1.0);

}  // namespace bargebench::ad

#endif  // BARGEBENCH_AUTODIFF_TENSOR_H_
