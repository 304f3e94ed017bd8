// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/nn/optim.hpp"

#include <cmath>

namespace ivedit::nn {

AdamOptimizer::AdamOptimizer(std::vector<NodePtr> params, Config cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void AdamOptimizer::step() {
  ++step_count_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Node& p = *params_[i];
    if (p.grad.size() != p.value.size()) continue;  // no grad this step
    Tensor& m = m_[i];
    Tensor& v = v_[i];
    for (int64_t j = 0; j < p.value.size(); ++j) {
      double g = p.grad[j];
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g;
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g * g;
      double mhat = m[j] / bc1;
      double vhat = v[j] / bc2;
      p.value[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
  zero_grad();
}

}  // namespace ivedit::nn
