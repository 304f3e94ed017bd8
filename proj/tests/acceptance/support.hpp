// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles used by the acceptance suite. Plain-loop
// implementations, kept free of the production code paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "ivedit/connector/connector.hpp"
#include "ivedit/pipeline/ops.hpp"

namespace acceptance {

// Dense mixture: evaluate every expert, full softmax over gate logits,
// zero non-selected weights (renormalized), sum.
inline std::vector<double> dense_moe_oracle(const std::vector<double>& x,
                                            const ivedit::connector::MoEFFNParams& p, int k,
                                            bool renorm) {
  int e = static_cast<int>(p.experts.size());
  int d = static_cast<int>(x.size());
  const auto& gw = p.gate.w->value;
  std::vector<double> logits(e, 0.0);
  for (int i = 0; i < e; ++i) {
    for (int j = 0; j < d; ++j) logits[i] += gw.at2(i, j) * x[j];
  }
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(e);
  double z = 0;
  for (int i = 0; i < e; ++i) z += probs[i] = std::exp(logits[i] - mx);
  for (auto& v : probs) v /= z;
  std::vector<int> order(e);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (logits[a] != logits[b]) return logits[a] > logits[b];
    return a < b;
  });
  std::vector<double> w(e, 0.0);
  double mass = 0;
  for (int j = 0; j < k; ++j) mass += probs[order[j]];
  for (int j = 0; j < k; ++j) w[order[j]] = renorm ? probs[order[j]] / mass : probs[order[j]];
  std::vector<double> y(d, 0.0);
  for (int i = 0; i < e; ++i) {
    if (w[i] == 0.0) continue;
    const auto& ex = p.experts[i];
    int dff = ex.w1->value.dim(0);
    std::vector<double> h(dff, 0.0);
    for (int r = 0; r < dff; ++r) {
      double s = ex.b1->value[r];
      for (int j = 0; j < d; ++j) s += ex.w1->value.at2(r, j) * x[j];
      h[r] = 0.5 * s * (1.0 + std::erf(s / std::sqrt(2.0)));
    }
    for (int r = 0; r < d; ++r) {
      double s = ex.b2->value[r];
      for (int j = 0; j < dff; ++j) s += ex.w2->value.at2(r, j) * h[j];
      y[r] += w[i] * s;
    }
  }
  return y;
}

// Exhaustive subset search with the documented tie rules (max IoU, then
// fewer masks, then lexicographically smaller index set).
inline std::optional<std::vector<int>> subset_oracle(const ivedit::core::MaskFrame& fg,
                                                     const ivedit::pipeline::MaskSet& ms,
                                                     double thr) {
  int n = static_cast<int>(ms.masks.size());
  std::optional<std::vector<int>> best;
  double best_iou = -1;
  for (uint32_t bits = 1; bits < (1u << n); ++bits) {
    ivedit::core::MaskFrame u(fg.h, fg.w);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (bits & (1u << i)) {
        idx.push_back(i);
        for (size_t j = 0; j < u.data.size(); ++j) u.data[j] |= ms.masks[i].data[j];
      }
    }
    int64_t inter = 0, uni = 0;
    for (size_t j = 0; j < u.data.size(); ++j) {
      bool av = fg.data[j] != 0, bv = u.data[j] != 0;
      inter += av && bv;
      uni += av || bv;
    }
    double iou = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    if (iou <= thr) continue;
    bool better = !best || iou > best_iou ||
                  (iou == best_iou && (idx.size() < best->size() ||
                                       (idx.size() == best->size() && idx < *best)));
    if (better) {
      best = idx;
      best_iou = iou;
    }
  }
  return best;
}

}  // namespace acceptance
