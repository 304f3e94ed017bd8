// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// The MoE connector: a learnable-query encoder/decoder whose feed-forward
// sublayers are sparse expert mixtures, with a zero-initialized output
// projection so a freshly built module contributes exactly nothing.
//
//   Y = W_o( Dec( Q_l, Enc( F_i(X_in) ) ) )
//   y = sum_{i in S} w_i * ( W2_i * GELU(W1_i x + b1_i) + b2_i ),
//       S = top-k indices of softmax(W_g x)
//
// Routing is per token position; top-k ties break by ascending expert index;
// the selected softmax mass is renormalized to sum to 1 (raw-mass mode is
// available behind ConnectorConfig::renormalize_weights for ablation).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivedit/core/types.hpp"
#include "ivedit/nn/archive.hpp"
#include "ivedit/nn/graph.hpp"

namespace ivedit::connector {

struct ConnectorConfig {
  int d_in = 48;     // MLLM hidden dim
  int d_h = 32;      // connector hidden dim
  int d_out = 32;    // fused text-feature dim
  int l_q = 8;       // learnable query length (512 in the reference config)
  int n_enc_layers = 2;
  int n_dec_layers = 2;
  int n_experts = 6;
  int top_k = 2;
  int d_ff = 64;     // expert inner dim
  int n_heads = 4;
  bool renormalize_weights = true;

  // Reference-scale configuration: 2+2 layers, 6 experts with 2 active,
  // 512 learnable queries.
  static ConnectorConfig reference(int d_in, int d_h, int d_out);
  void validate() const;

  std::string to_json() const;
  static ConnectorConfig from_json(const std::string& text);
};

struct GateParams {
  nn::NodePtr w;  // [E, D_h]
};

struct ExpertParams {
  nn::NodePtr w1;  // [D_ff, D_h]
  nn::NodePtr b1;  // [D_ff]
  nn::NodePtr w2;  // [D_h, D_ff]
  nn::NodePtr b2;  // [D_h]
};

struct MoEFFNParams {
  GateParams gate;
  std::vector<ExpertParams> experts;
};

struct AttentionParams {
  nn::NodePtr wq, wk, wv, wo;  // [D_h, D_h] each, bias-free
};

struct NormParams {
  nn::NodePtr gain, bias;  // [D_h]
};

struct EncDecLayerParams {
  AttentionParams self_attn;
  std::optional<AttentionParams> cross_attn;  // decoder layers only
  MoEFFNParams moe;
  NormParams norm_self, norm_cross, norm_moe;  // pre-norm per sublayer
};

struct ConnectorParams {
  // F_i: two-layer FFN mapping d_in -> D_h.
  nn::NodePtr fi_w1, fi_b1, fi_w2, fi_b2;
  std::vector<EncDecLayerParams> enc_layers;
  std::vector<EncDecLayerParams> dec_layers;
  nn::NodePtr q_l;  // [L_q, D_h], broadcast over batch
  NormParams enc_final_norm, dec_final_norm;
  nn::NodePtr w_o;       // [D_h, d_out], exactly zero at init
  nn::NodePtr w_o_bias;  // [d_out], exactly zero at init

  // All parameters in canonical key order (matches archive keys).
  std::vector<nn::NodePtr> all() const;
  std::vector<std::pair<std::string, nn::NodePtr>> named() const;
};

// One routing decision, recorded for diagnostics and gradient-check setup.
struct RoutingEvent {
  std::vector<int> selected;
  double margin = 0.0;  // logit gap between rank k and rank k+1 (inf if k == E)
};

struct RoutingTrace {
  std::vector<RoutingEvent> events;
  double min_margin() const;
  std::vector<int64_t> histogram(int n_experts) const;
};

struct GateSelection {
  std::vector<int> indices;     // ascending rank order by probability
  std::vector<double> weights;  // parallel to indices, sums to 1 when renormalized
};

// Top-k selection over softmax(W_g x). x: [D_h]; gate: [E, D_h].
GateSelection gate_select(const nn::Tensor& x, const nn::Tensor& gate_w, int k,
                          bool renormalize = true);

// Differentiable MoE-FFN over any leading shape [..., D_h].
nn::NodePtr moe_ffn_forward(const nn::NodePtr& x, const MoEFFNParams& params, int k,
                            bool renormalize = true, RoutingTrace* trace = nullptr);

// Convenience value-level single-vector evaluation.
nn::Tensor moe_ffn_forward_value(const nn::Tensor& x, const MoEFFNParams& params, int k,
                                 bool renormalize = true);

// Keeps exactly the tokens whose is_prefix flag is false, order preserved.
// Throws DataError when every token is a prefix token.
core::InstructionEmbedding filter_prefix_tokens(const core::InstructionEmbedding& emb);
nn::Tensor filter_prefix_tokens(const nn::Tensor& tokens, const std::vector<uint8_t>& is_prefix);

// Full forward pass. x_in: [b, s, d_in] -> [b, L_q, d_out].
nn::NodePtr connector_forward(const nn::NodePtr& x_in, const ConnectorParams& params,
                              const ConnectorConfig& config, RoutingTrace* trace = nullptr);

// Deterministic init: every non-output weight drawn variance-scaled uniform
// by fan-in from a per-key stream; W_o and its bias exactly zero.
ConnectorParams init_connector(const ConnectorConfig& config, uint64_t seed);

// Selection counts over a batch of routed positions. inputs: [P, D_h].
std::vector<int64_t> expert_utilization(const nn::Tensor& inputs, const MoEFFNParams& params,
                                        int k);

void save_connector(const ConnectorParams& params, const ConnectorConfig& config,
                    const std::filesystem::path& file);
std::pair<ConnectorParams, ConnectorConfig> load_connector(const std::filesystem::path& file);

}  // namespace ivedit::connector
