// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Reverse-mode autodiff over Tensor. Graphs are built per forward pass from
// shared leaf nodes (parameters); backward() runs a topological sweep and
// accumulates into leaf grads. Everything is deterministic and
// single-threaded; gradients are validated against central finite
// differences in the test suite.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ivedit/nn/tensor.hpp"

namespace ivedit::nn {

struct Node;
using NodePtr = std::shared_ptr<Node>;

struct Node {
  Tensor value;
  Tensor grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<NodePtr> parents;
  // Propagates this node's grad into parents' grads.
  std::function<void(Node&)> backprop;
  std::string name;

  void accumulate(const Tensor& g);
  void ensure_grad();
};

NodePtr leaf(Tensor value, bool requires_grad = false, std::string name = {});
NodePtr constant(Tensor value);

// y = a @ b. a: [..., m, k]; b: [k, n] or [..., k, n] with identical leading dims.
NodePtr matmul(const NodePtr& a, const NodePtr& b);
// Elementwise with right-aligned broadcasting of b onto a.
NodePtr add(const NodePtr& a, const NodePtr& b);
NodePtr sub(const NodePtr& a, const NodePtr& b);
NodePtr mul(const NodePtr& a, const NodePtr& b);
NodePtr scale(const NodePtr& a, double s);
NodePtr add_scalar(const NodePtr& a, double s);
// Exact GELU: 0.5 x (1 + erf(x / sqrt(2))).
NodePtr gelu(const NodePtr& a);
NodePtr sigmoid(const NodePtr& a);
NodePtr softmax_lastdim(const NodePtr& a);
// Normalizes over the last dim; gain/bias shaped [d].
NodePtr layer_norm(const NodePtr& a, const NodePtr& gain, const NodePtr& bias,
                   double eps = 1e-6);
NodePtr reshape(const NodePtr& a, std::vector<int> shape);
NodePtr permute(const NodePtr& a, std::vector<int> perm);
NodePtr transpose_last2(const NodePtr& a);
NodePtr concat(const std::vector<NodePtr>& xs, int axis);
NodePtr slice(const NodePtr& a, int axis, int start, int len);
// Picks columns of the last dim, e.g. selected gate logits.
NodePtr gather_lastdim(const NodePtr& a, const std::vector<int>& indices);
// Repeats a [s...] tensor n times along a new leading axis -> [n, s...].
NodePtr tile_leading(const NodePtr& a, int n);
NodePtr sum_all(const NodePtr& a);
NodePtr mean_all(const NodePtr& a);
// Mean of (a - b)^2 over all elements; scalar.
NodePtr mse(const NodePtr& a, const NodePtr& b);

// Seeds root grad with ones (root is typically scalar) and sweeps the graph.
void backward(const NodePtr& root);
void zero_grad(const std::vector<NodePtr>& params);

}  // namespace ivedit::nn
