// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/nn/tensor.hpp"

#include <cmath>
#include <sstream>

#include "ivedit/core/errors.hpp"

namespace ivedit::nn {

int64_t shape_size(const std::vector<int>& shape) {
  int64_t n = 1;
  for (int d : shape) {
    if (d < 0) throw core::ParameterError("negative tensor dimension");
    n *= d;
  }
  return n;
}

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_size(shape_)), 0.0) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data) : shape_(std::move(shape)) {
  if (shape_size(shape_) != static_cast<int64_t>(data.size())) {
    throw core::ParameterError("tensor data does not match shape");
  }
  data_ = std::move(data);
}

Tensor Tensor::full(std::vector<int> shape, double v) {
  Tensor t(std::move(shape));
  for (auto& x : t.data_) x = v;
  return t;
}

Tensor Tensor::uniform_fan_in(std::vector<int> shape, int fan_in, core::Rng& rng) {
  Tensor t(std::move(shape));
  double a = std::sqrt(3.0 / static_cast<double>(fan_in < 1 ? 1 : fan_in));
  for (auto& x : t.data_) x = (rng.next_double() * 2.0 - 1.0) * a;
  return t;
}

Tensor Tensor::randn(std::vector<int> shape, core::Rng& rng, double stddev) {
  Tensor t(std::move(shape));
  for (auto& x : t.data_) x = rng.next_normal() * stddev;
  return t;
}

std::string Tensor::shape_str() const {
  std::ostringstream ss;
  ss << "[";
  for (size_t i = 0; i < shape_.size(); ++i) ss << (i ? "," : "") << shape_[i];
  ss << "]";
  return ss.str();
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (shape_size(shape) != size()) {
    throw core::ParameterError("reshape size mismatch");
  }
  Tensor t = *this;
  t.shape_ = std::move(shape);
  return t;
}

}  // namespace ivedit::nn
