// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ivedit/nn/graph.hpp"

namespace ivedit::nn {

// Adam with bias correction. State is addressed by parameter order, which is
// canonical (see param key ordering), so checkpoints restore exactly.
class AdamOptimizer {
 public:
  struct Config {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  AdamOptimizer(std::vector<NodePtr> params, Config cfg);

  // Applies one update from accumulated grads, then clears them.
  void step();
  void zero_grad() { nn::zero_grad(params_); }

  int64_t step_count() const { return step_count_; }
  void set_lr(double lr) { cfg_.lr = lr; }
  double lr() const { return cfg_.lr; }

  const std::vector<NodePtr>& params() const { return params_; }

  // Moment buffers, exposed for checkpointing.
  std::vector<Tensor>& moment1() { return m_; }
  std::vector<Tensor>& moment2() { return v_; }
  const std::vector<Tensor>& moment1() const { return m_; }
  const std::vector<Tensor>& moment2() const { return v_; }
  void set_step_count(int64_t n) { step_count_ = n; }

 private:
  std::vector<NodePtr> params_;
  Config cfg_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  int64_t step_count_ = 0;
};

}  // namespace ivedit::nn
