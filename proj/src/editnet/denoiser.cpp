// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/editnet/denoiser.hpp"

#include <cmath>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"

namespace ivedit::editnet {

using core::ParameterError;
using nn::NodePtr;
using nn::Tensor;

void DenoiserConfig::validate() const {
  if (t < 1 || h < 1 || w < 1 || c_lat < 1) throw ParameterError("denoiser: bad geometry");
  if (h % patch_h != 0 || w % patch_w != 0) {
    throw ParameterError("denoiser: patch size must divide latent extent");
  }
  if (d_model % n_heads != 0) throw ParameterError("denoiser: heads must divide d_model");
}

namespace {

NodePtr init_weight(std::vector<int> shape, int fan_in, core::Rng root, const std::string& key) {
  core::Rng rng = root.fork(key);
  return nn::leaf(Tensor::uniform_fan_in(std::move(shape), fan_in, rng), true, key);
}

NodePtr init_zeros(std::vector<int> shape, const std::string& key) {
  return nn::leaf(Tensor(std::move(shape)), true, key);
}

NodePtr init_ones(std::vector<int> shape, const std::string& key) {
  return nn::leaf(Tensor::full(std::move(shape), 1.0), true, key);
}

// Fixed sinusoidal features of position index, [n, d].
Tensor sinusoid_table(int n, int d, double max_freq = 10000.0) {
  Tensor out({n, d});
  for (int p = 0; p < n; ++p) {
    for (int i = 0; i < d; ++i) {
      double omega = std::pow(max_freq, -static_cast<double>(i / 2 * 2) / d);
      double a = p * omega;
      out.at2(p, i) = i % 2 == 0 ? std::sin(a) : std::cos(a);
    }
  }
  return out;
}

// Sinusoidal embedding of a scalar time in [0,1], dim d.
Tensor time_features(double t, int d) {
  Tensor out({1, d});
  for (int i = 0; i < d; ++i) {
    double omega = std::pow(1000.0, -static_cast<double>(i / 2 * 2) / d);
    double a = t * 100.0 * omega;
    out[i] = i % 2 == 0 ? std::sin(a) : std::cos(a);
  }
  return out;
}

// Softmax multi-head self-attention, bias-free.
NodePtr self_attention(const NodePtr& x, const DenoiserBlockParams& p, int n_heads) {
  int b = x->value.dim(0), l = x->value.dim(1), d = x->value.dim(2);
  int dh = d / n_heads;
  NodePtr q = nn::matmul(x, p.attn_wq);
  NodePtr k = nn::matmul(x, p.attn_wk);
  NodePtr v = nn::matmul(x, p.attn_wv);
  q = nn::permute(nn::reshape(q, {b, l, n_heads, dh}), {0, 2, 1, 3});
  k = nn::permute(nn::reshape(k, {b, l, n_heads, dh}), {0, 2, 1, 3});
  v = nn::permute(nn::reshape(v, {b, l, n_heads, dh}), {0, 2, 1, 3});
  NodePtr attn = nn::softmax_lastdim(
      nn::scale(nn::matmul(q, nn::transpose_last2(k)), 1.0 / std::sqrt(dh)));
  NodePtr ctx = nn::reshape(nn::permute(nn::matmul(attn, v), {0, 2, 1, 3}), {b, l, d});
  return nn::matmul(ctx, p.attn_wo);
}

// Sigmoid-weighted cross-attention over the fused context; unnormalized sum
// of value contributions (see header).
NodePtr context_attention(const NodePtr& x, const NodePtr& context,
                          const DenoiserBlockParams& p, int n_heads) {
  int b = x->value.dim(0), l = x->value.dim(1), d = x->value.dim(2);
  int lc = context->value.dim(1);
  int dh = d / n_heads;
  NodePtr q = nn::matmul(x, p.xattn_wq);
  NodePtr k = nn::matmul(context, p.xattn_wk);  // [b, Lc, d_model]
  NodePtr v = nn::matmul(context, p.xattn_wv);
  q = nn::permute(nn::reshape(q, {b, l, n_heads, dh}), {0, 2, 1, 3});
  k = nn::permute(nn::reshape(k, {b, lc, n_heads, dh}), {0, 2, 1, 3});
  v = nn::permute(nn::reshape(v, {b, lc, n_heads, dh}), {0, 2, 1, 3});
  NodePtr weights = nn::sigmoid(
      nn::scale(nn::matmul(q, nn::transpose_last2(k)), 1.0 / std::sqrt(dh)));
  NodePtr ctx = nn::reshape(nn::permute(nn::matmul(weights, v), {0, 2, 1, 3}), {b, l, d});
  return nn::matmul(ctx, p.xattn_wo);
}

}  // namespace

DenoiserParams init_denoiser(const DenoiserConfig& cfg, uint64_t seed) {
  cfg.validate();
  core::Rng root(core::mix64(seed, core::fnv1a64("denoiser")));
  DenoiserParams p;
  p.patch_w = init_weight({cfg.patch_in(), cfg.d_model}, cfg.patch_in(), root, "patch.W");
  p.patch_b = init_zeros({cfg.d_model}, "patch.b");
  p.time_w1 = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, "time.W1");
  p.time_b1 = init_zeros({cfg.d_model}, "time.b1");
  p.time_w2 = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, "time.W2");
  p.time_b2 = init_zeros({cfg.d_model}, "time.b2");
  for (int i = 0; i < cfg.n_blocks; ++i) {
    std::string bp = "block." + std::to_string(i);
    DenoiserBlockParams b;
    b.norm1_g = init_ones({cfg.d_model}, bp + ".norm1.gain");
    b.norm1_b = init_zeros({cfg.d_model}, bp + ".norm1.bias");
    b.attn_wq = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, bp + ".attn.Wq");
    b.attn_wk = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, bp + ".attn.Wk");
    b.attn_wv = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, bp + ".attn.Wv");
    b.attn_wo = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, bp + ".attn.Wo");
    b.norm2_g = init_ones({cfg.d_model}, bp + ".norm2.gain");
    b.norm2_b = init_zeros({cfg.d_model}, bp + ".norm2.bias");
    b.xattn_wq = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, bp + ".xattn.Wq");
    b.xattn_wk = init_weight({cfg.d_ctx, cfg.d_model}, cfg.d_ctx, root, bp + ".xattn.Wk");
    b.xattn_wv = init_weight({cfg.d_ctx, cfg.d_model}, cfg.d_ctx, root, bp + ".xattn.Wv");
    b.xattn_wo = init_weight({cfg.d_model, cfg.d_model}, cfg.d_model, root, bp + ".xattn.Wo");
    b.norm3_g = init_ones({cfg.d_model}, bp + ".norm3.gain");
    b.norm3_b = init_zeros({cfg.d_model}, bp + ".norm3.bias");
    b.ffn_w1 = init_weight({cfg.d_model, cfg.d_ff}, cfg.d_model, root, bp + ".ffn.W1");
    b.ffn_b1 = init_zeros({cfg.d_ff}, bp + ".ffn.b1");
    b.ffn_w2 = init_weight({cfg.d_ff, cfg.d_model}, cfg.d_ff, root, bp + ".ffn.W2");
    b.ffn_b2 = init_zeros({cfg.d_model}, bp + ".ffn.b2");
    p.blocks.push_back(std::move(b));
  }
  p.final_g = init_ones({cfg.d_model}, "final_norm.gain");
  p.final_b = init_zeros({cfg.d_model}, "final_norm.bias");
  p.head_w = init_weight({cfg.d_model, cfg.patch_out()}, cfg.d_model, root, "head.W");
  p.head_b = init_zeros({cfg.patch_out()}, "head.b");
  return p;
}

std::vector<std::pair<std::string, NodePtr>> DenoiserParams::named() const {
  std::vector<std::pair<std::string, NodePtr>> out;
  auto push = [&](const NodePtr& n) {
    if (n) out.emplace_back(n->name, n);
  };
  push(patch_w);
  push(patch_b);
  push(time_w1);
  push(time_b1);
  push(time_w2);
  push(time_b2);
  for (const auto& b : blocks) {
    push(b.norm1_g);
    push(b.norm1_b);
    push(b.attn_wq);
    push(b.attn_wk);
    push(b.attn_wv);
    push(b.attn_wo);
    push(b.norm2_g);
    push(b.norm2_b);
    push(b.xattn_wq);
    push(b.xattn_wk);
    push(b.xattn_wv);
    push(b.xattn_wo);
    push(b.norm3_g);
    push(b.norm3_b);
    push(b.ffn_w1);
    push(b.ffn_b1);
    push(b.ffn_w2);
    push(b.ffn_b2);
  }
  push(final_g);
  push(final_b);
  push(head_w);
  push(head_b);
  return out;
}

std::vector<NodePtr> DenoiserParams::all() const {
  std::vector<NodePtr> out;
  for (auto& [name, node] : named()) out.push_back(node);
  return out;
}

NodePtr denoiser_forward(const NodePtr& cond, const NodePtr& context,
                         const std::vector<double>& tvals, const DenoiserParams& params,
                         const DenoiserConfig& cfg) {
  cfg.validate();
  const auto& cs = cond->value.shape();
  if (cs.size() != 5 || cs[1] != cfg.t || cs[2] != cfg.h || cs[3] != cfg.w ||
      cs[4] != 2 * cfg.c_lat) {
    throw ParameterError("denoiser_forward: condition input must be [b,t,h,w,2c]");
  }
  int b = cs[0];
  if (static_cast<int>(tvals.size()) != b) {
    throw ParameterError("denoiser_forward: one timestep per batch element required");
  }
  if (context->value.ndim() != 3 || context->value.dim(0) != b ||
      context->value.dim(2) != cfg.d_ctx) {
    throw ParameterError("denoiser_forward: context must be [b, L, d_ctx]");
  }
  if (!cond->value.all_finite() || !context->value.all_finite()) {
    throw core::DataError("denoiser_forward: non-finite input");
  }

  int gh = cfg.h / cfg.patch_h, gw = cfg.w / cfg.patch_w;
  int n_tokens = cfg.tokens();
  // patchify: [b,t,h,w,2c] -> [b,t,gh,ph,gw,pw,2c] -> [b,t,gh,gw,ph,pw,2c]
  NodePtr x = nn::reshape(cond, {b, cfg.t, gh, cfg.patch_h, gw, cfg.patch_w, 2 * cfg.c_lat});
  x = nn::permute(x, {0, 1, 2, 4, 3, 5, 6});
  x = nn::reshape(x, {b, n_tokens, cfg.patch_in()});
  x = nn::add(nn::matmul(x, params.patch_w), params.patch_b);

  // fixed positional encoding + learned time embedding
  x = nn::add(x, nn::constant(sinusoid_table(n_tokens, cfg.d_model)));
  Tensor tfeat({b, 1, cfg.d_model});
  for (int i = 0; i < b; ++i) {
    Tensor row = time_features(tvals[static_cast<size_t>(i)], cfg.d_model);
    for (int j = 0; j < cfg.d_model; ++j) tfeat[i * cfg.d_model + j] = row[j];
  }
  NodePtr temb = nn::constant(tfeat);
  temb = nn::add(nn::matmul(temb, params.time_w1), params.time_b1);
  temb = nn::gelu(temb);
  temb = nn::add(nn::matmul(temb, params.time_w2), params.time_b2);  // [b,1,d]
  x = nn::add(x, temb);

  for (const auto& blk : params.blocks) {
    NodePtr n1 = nn::layer_norm(x, blk.norm1_g, blk.norm1_b);
    x = nn::add(x, self_attention(n1, blk, cfg.n_heads));
    NodePtr n2 = nn::layer_norm(x, blk.norm2_g, blk.norm2_b);
    x = nn::add(x, context_attention(n2, context, blk, cfg.n_heads));
    NodePtr n3 = nn::layer_norm(x, blk.norm3_g, blk.norm3_b);
    NodePtr f = nn::add(nn::matmul(nn::gelu(nn::add(nn::matmul(n3, blk.ffn_w1), blk.ffn_b1)),
                                   blk.ffn_w2),
                        blk.ffn_b2);
    x = nn::add(x, f);
  }
  x = nn::layer_norm(x, params.final_g, params.final_b);
  x = nn::add(nn::matmul(x, params.head_w), params.head_b);  // [b, N, patch_out]

  // unpatchify
  x = nn::reshape(x, {b, cfg.t, gh, gw, cfg.patch_h, cfg.patch_w, cfg.c_lat});
  x = nn::permute(x, {0, 1, 2, 4, 3, 5, 6});
  return nn::reshape(x, {b, cfg.t, cfg.h, cfg.w, cfg.c_lat});
}

Tensor denoise(const Tensor& cond, const Tensor& context, double t,
               const DenoiserParams& params, const DenoiserConfig& cfg) {
  std::vector<int> cshape = cond.shape();
  cshape.insert(cshape.begin(), 1);
  std::vector<int> xshape = context.shape();
  xshape.insert(xshape.begin(), 1);
  NodePtr out = denoiser_forward(nn::constant(cond.reshaped(cshape)),
                                 nn::constant(context.reshaped(xshape)), {t}, params, cfg);
  std::vector<int> oshape(out->value.shape().begin() + 1, out->value.shape().end());
  return out->value.reshaped(oshape);
}

}  // namespace ivedit::editnet
