// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic RNG used everywhere instead of std distributions, whose
// output is implementation-defined. splitmix64 core, Box-Muller normals,
// rejection-sampled bounded ints. Streams fork by label so results do not
// depend on call order across components.

#pragma once

#include <cstdint>
#include <string_view>

namespace ivedit::core {

uint64_t fnv1a64(std::string_view s);
uint64_t mix64(uint64_t a, uint64_t b);

class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), state_(seed) {}

  uint64_t next_u64();
  // Uniform in [0,1).
  double next_double();
  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  int64_t next_int(int64_t lo, int64_t hi);
  // Standard normal via Box-Muller.
  double next_normal();
  // Independent stream derived from this generator's seed and a label;
  // does not advance this generator.
  Rng fork(std::string_view label) const { return Rng(mix64(seed_, fnv1a64(label))); }
  Rng fork(uint64_t salt) const { return Rng(mix64(seed_, salt)); }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t state_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace ivedit::core
