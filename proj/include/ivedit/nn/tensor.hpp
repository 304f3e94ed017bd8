// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal dense double tensor, row-major. All shapes in this project are
// small enough that naive loops beat any dependency they would replace.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ivedit/core/rng.hpp"

namespace ivedit::nn {

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);
  Tensor(std::vector<int> shape, std::vector<double> data);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int> shape, double v);
  static Tensor scalar(double v) { return Tensor({1}, {v}); }
  // Uniform in [-a, a] with a = sqrt(3 / fan_in): unit-variance-scaled init.
  static Tensor uniform_fan_in(std::vector<int> shape, int fan_in, core::Rng& rng);
  static Tensor randn(std::vector<int> shape, core::Rng& rng, double stddev = 1.0);

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  double& at2(int i, int j) { return data_[static_cast<size_t>(i) * shape_[1] + j]; }
  double at2(int i, int j) const { return data_[static_cast<size_t>(i) * shape_[1] + j]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
  std::string shape_str() const;

  double max_abs() const;
  bool all_finite() const;

  Tensor reshaped(std::vector<int> shape) const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

int64_t shape_size(const std::vector<int>& shape);

}  // namespace ivedit::nn
