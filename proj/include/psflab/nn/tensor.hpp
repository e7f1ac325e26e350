/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The psflab Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PSFLAB_NN_TENSOR_HPP
#define PSFLAB_NN_TENSOR_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "psflab/core.hpp"

namespace psflab::nn {

/// (channels, height, width). Scalars are 1 x 1 x 1.
struct Shape {
  Index c = 1;
  Index h = 1;
  Index w = 1;

  Index numel() const { return c * h * w; }
  Index plane() const { return h * w; }
  std::string str() const;
  bool operator==(const Shape&) const = default;
};

template <typename Scalar>
struct Node {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Shape shape;
  Array value;  // channel-major, then row-major
  Array grad;   // empty until first accumulation
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  Array& ensure_grad() {
    if (grad.size() != value.size()) grad = Array::Zero(value.size());
    return grad;
  }
};

/// Shared handle to a node of the autodiff tape. Copies alias the same node.
template <typename Scalar>
class Tensor {
 public:
  using NodeT = Node<Scalar>;
  using Array = typename NodeT::Array;

  Tensor() = default;
  explicit Tensor(std::shared_ptr<NodeT> node) : node_(std::move(node)) {}

  static Tensor zeros(Shape s, bool requires_grad = false);
  static Tensor from(Shape s, Array values, bool requires_grad = false);
  static Tensor scalar(Scalar v);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const { return node_->shape; }
  Index numel() const { return node_->shape.numel(); }
  Array& value() { return node_->value; }
  const Array& value() const { return node_->value; }
  Array& grad() { return node_->ensure_grad(); }
  bool requires_grad() const { return node_->requires_grad; }
  const char* op() const { return node_->op; }
  Scalar item() const;

  /// Row-major view of one channel plane.
  Eigen::Map<Image<Scalar>> channel(Index c);
  Eigen::Map<const Image<Scalar>> channel(Index c) const;

  /// Reverse sweep from this scalar; accumulates into every reachable leaf's grad.
  void backward() const;
  void zero_grad() const;

  /// Leaf sharing no history with this tensor.
  Tensor detach() const;

  const std::shared_ptr<NodeT>& node() const { return node_; }

 private:
  std::shared_ptr<NodeT> node_;
};

/// Builds a result node. If no parent requires grad the history is dropped.
/// Throws NumericError naming `op` when the value is not finite.
template <typename Scalar>
Tensor<Scalar> make_result(const char* op, Shape shape, typename Node<Scalar>::Array value,
                           std::vector<Tensor<Scalar>> parents, std::function<void(Node<Scalar>&)> backward);

extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace psflab::nn

#endif  // PSFLAB_NN_TENSOR_HPP
