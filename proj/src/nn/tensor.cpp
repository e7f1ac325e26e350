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

#include "psflab/nn/tensor.hpp"

#include <unordered_set>

namespace psflab::nn {

std::string Shape::str() const {
  return "(" + std::to_string(c) + ", " + std::to_string(h) + ", " + std::to_string(w) + ")";
}

template <typename Scalar>
Tensor<Scalar> Tensor<Scalar>::zeros(Shape s, bool requires_grad) {
  return from(s, Array::Zero(s.numel()), requires_grad);
}

template <typename Scalar>
Tensor<Scalar> Tensor<Scalar>::from(Shape s, Array values, bool requires_grad) {
  if (values.size() != s.numel()) throw InvalidArgument("Tensor::from: " + s.str() + " does not match value count");
  auto n = std::make_shared<NodeT>();
  n->shape = s;
  n->value = std::move(values);
  n->requires_grad = requires_grad;
  return Tensor(std::move(n));
}

template <typename Scalar>
Tensor<Scalar> Tensor<Scalar>::scalar(Scalar v) {
  Array a(1);
  a[0] = v;
  return from(Shape{}, std::move(a));
}

template <typename Scalar>
Scalar Tensor<Scalar>::item() const {
  if (numel() != 1) throw InvalidArgument("Tensor::item: tensor of shape " + shape().str() + " is not a scalar");
  return node_->value[0];
}

template <typename Scalar>
Eigen::Map<Image<Scalar>> Tensor<Scalar>::channel(Index c) {
  const Shape& s = shape();
  return Eigen::Map<Image<Scalar>>(node_->value.data() + c * s.plane(), s.h, s.w);
}

template <typename Scalar>
Eigen::Map<const Image<Scalar>> Tensor<Scalar>::channel(Index c) const {
  const Shape& s = shape();
  return Eigen::Map<const Image<Scalar>>(node_->value.data() + c * s.plane(), s.h, s.w);
}

template <typename Scalar>
void Tensor<Scalar>::backward() const {
  if (numel() != 1) throw InvalidArgument("backward: loss must be a scalar");
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<NodeT*> order;
  std::unordered_set<NodeT*> visited;
  std::vector<std::pair<NodeT*, std::size_t>> stack{{node_.get(), 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      NodeT* p = n->parents[next++].get();
      if (p->requires_grad && visited.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  // Interior gradients are per call; only leaves accumulate.
  for (NodeT* n : order)
    if (n->backward) n->ensure_grad().setZero();
  node_->ensure_grad().setOnes();
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backward) (*it)->backward(**it);
}

template <typename Scalar>
void Tensor<Scalar>::zero_grad() const {
  if (node_->grad.size() > 0) node_->grad.setZero();
}

template <typename Scalar>
Tensor<Scalar> Tensor<Scalar>::detach() const {
  return from(shape(), value(), false);
}

template <typename Scalar>
Tensor<Scalar> make_result(const char* op, Shape shape, typename Node<Scalar>::Array value,
                           std::vector<Tensor<Scalar>> parents, std::function<void(Node<Scalar>&)> backward) {
  if (!value.allFinite()) throw NumericError(std::string("non-finite value produced by ") + op);
  auto n = std::make_shared<Node<Scalar>>();
  n->shape = shape;
  n->value = std::move(value);
  n->op = op;
  for (const auto& p : parents) n->requires_grad = n->requires_grad || p.requires_grad();
  if (n->requires_grad) {
    for (auto& p : parents) n->parents.push_back(p.node());
    n->backward = std::move(backward);
  }
  return Tensor<Scalar>(std::move(n));
}

template class Tensor<float>;
template class Tensor<double>;

template Tensor<float> make_result(const char*, Shape, Node<float>::Array, std::vector<Tensor<float>>,
                                   std::function<void(Node<float>&)>);
template Tensor<double> make_result(const char*, Shape, Node<double>::Array, std::vector<Tensor<double>>,
                                    std::function<void(Node<double>&)>);

}  // namespace psflab::nn
