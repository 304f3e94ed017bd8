// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Toy latent-video diffusion transformer. The noisy latent is concatenated
// with the source-video latent along channels, patchified into tokens, and
// refined by pre-norm blocks: softmax self-attention over latent tokens,
// sigmoid-weighted cross-attention over the fused text+connector context,
// and a dense FFN.
//
// The context attention weights keys with sigmoid(q.k/sqrt(d)) and sums the
// value contributions without normalizing across tokens. An all-zero context
// token therefore contributes exactly zero (its value projection is zero and
// no softmax denominator couples it to other tokens) while still receiving
// nonzero attention weight, which keeps gradients flowing into the connector
// output projection from the very first step.

#pragma once

#include <filesystem>
#include <vector>

#include "ivedit/nn/archive.hpp"
#include "ivedit/nn/graph.hpp"

namespace ivedit::editnet {

struct DenoiserConfig {
  int t = 8, h = 8, w = 8;  // latent geometry
  int c_lat = 4;
  int patch_h = 2, patch_w = 2;
  int d_model = 32;
  int n_blocks = 2;
  int n_heads = 4;
  int d_ff = 64;
  int d_ctx = 32;  // fused context feature dim

  int tokens() const { return t * (h / patch_h) * (w / patch_w); }
  int patch_in() const { return 2 * c_lat * patch_h * patch_w; }
  int patch_out() const { return c_lat * patch_h * patch_w; }
  void validate() const;
};

struct DenoiserBlockParams {
  nn::NodePtr norm1_g, norm1_b;
  nn::NodePtr attn_wq, attn_wk, attn_wv, attn_wo;      // [d_model, d_model]
  nn::NodePtr norm2_g, norm2_b;
  nn::NodePtr xattn_wq, xattn_wo;                      // [d_model, d_model]
  nn::NodePtr xattn_wk, xattn_wv;                      // [d_ctx, d_model]
  nn::NodePtr norm3_g, norm3_b;
  nn::NodePtr ffn_w1, ffn_b1, ffn_w2, ffn_b2;
};

struct DenoiserParams {
  nn::NodePtr patch_w, patch_b;    // [patch_in, d_model], [d_model]
  nn::NodePtr time_w1, time_b1;    // [d_model, d_model]
  nn::NodePtr time_w2, time_b2;    // [d_model, d_model]
  std::vector<DenoiserBlockParams> blocks;
  nn::NodePtr final_g, final_b;
  nn::NodePtr head_w, head_b;      // [d_model, patch_out]

  std::vector<std::pair<std::string, nn::NodePtr>> named() const;
  std::vector<nn::NodePtr> all() const;
};

DenoiserParams init_denoiser(const DenoiserConfig& cfg, uint64_t seed);

// cond: [b, t, h, w, 2*c_lat]; context: [b, L_ctx, d_ctx]; tvals: one
// timestep in [0,1] per batch element. Returns [b, t, h, w, c_lat].
nn::NodePtr denoiser_forward(const nn::NodePtr& cond, const nn::NodePtr& context,
                             const std::vector<double>& tvals, const DenoiserParams& params,
                             const DenoiserConfig& cfg);

// Single-sample value-level call used by evaluation paths.
nn::Tensor denoise(const nn::Tensor& cond, const nn::Tensor& context, double t,
                   const DenoiserParams& params, const DenoiserConfig& cfg);

}  // namespace ivedit::editnet
