// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/connector/connector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "ivedit/core/errors.hpp"

namespace ivedit::connector {

using core::DataError;
using core::ParameterError;
using nn::NodePtr;
using nn::Tensor;
using json = nlohmann::json;

ConnectorConfig ConnectorConfig::reference(int d_in, int d_h, int d_out) {
  ConnectorConfig c;
  c.d_in = d_in;
  c.d_h = d_h;
  c.d_out = d_out;
  c.l_q = 512;
  c.n_enc_layers = 2;
  c.n_dec_layers = 2;
  c.n_experts = 6;
  c.top_k = 2;
  c.d_ff = d_h * 2;
  c.n_heads = 1;
  return c;
}

void ConnectorConfig::validate() const {
  if (d_in < 1 || d_h < 1 || d_out < 1 || l_q < 1 || d_ff < 1) {
    throw ParameterError("connector config: all dims must be >= 1");
  }
  if (n_enc_layers < 1 || n_dec_layers < 1) {
    throw ParameterError("connector config: need at least one layer per stack");
  }
  if (top_k < 1 || top_k > n_experts) {
    throw ParameterError("connector config: require 1 <= k <= E");
  }
  if (n_heads < 1 || d_h % n_heads != 0) {
    throw ParameterError("connector config: head count must divide D_h");
  }
}

std::string ConnectorConfig::to_json() const {
  json j{{"d_in", d_in},
         {"d_h", d_h},
         {"d_out", d_out},
         {"l_q", l_q},
         {"n_enc_layers", n_enc_layers},
         {"n_dec_layers", n_dec_layers},
         {"n_experts", n_experts},
         {"top_k", top_k},
         {"d_ff", d_ff},
         {"n_heads", n_heads},
         {"renormalize_weights", renormalize_weights}};
  return j.dump();
}

ConnectorConfig ConnectorConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ConnectorConfig c;
  c.d_in = j.at("d_in");
  c.d_h = j.at("d_h");
  c.d_out = j.at("d_out");
  c.l_q = j.at("l_q");
  c.n_enc_layers = j.at("n_enc_layers");
  c.n_dec_layers = j.at("n_dec_layers");
  c.n_experts = j.at("n_experts");
  c.top_k = j.at("top_k");
  c.d_ff = j.at("d_ff");
  c.n_heads = j.at("n_heads");
  c.renormalize_weights = j.at("renormalize_weights");
  c.validate();
  return c;
}

double RoutingTrace::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : events) m = std::min(m, e.margin);
  return m;
}

std::vector<int64_t> RoutingTrace::histogram(int n_experts) const {
  std::vector<int64_t> h(n_experts, 0);
  for (const auto& e : events) {
    for (int idx : e.selected) ++h[static_cast<size_t>(idx)];
  }
  return h;
}

GateSelection gate_select(const Tensor& x, const Tensor& gate_w, int k, bool renormalize) {
  if (gate_w.ndim() != 2) throw ParameterError("gate_select: gate must be [E, D_h]");
  int e = gate_w.dim(0);
  int d = gate_w.dim(1);
  if (x.size() != d) throw ParameterError("gate_select: input dim mismatch");
  if (k < 1 || k > e) throw ParameterError("gate_select: require 1 <= k <= E");
  if (!x.all_finite()) throw ParameterError("gate_select: non-finite input");

  std::vector<double> logits(e, 0.0);
  for (int i = 0; i < e; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += gate_w.at2(i, j) * x[j];
    logits[static_cast<size_t>(i)] = s;
  }
  // Stable softmax over all experts.
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(e);
  double z = 0.0;
  for (int i = 0; i < e; ++i) {
    probs[i] = std::exp(logits[i] - mx);
    z += probs[i];
  }
  for (auto& p : probs) p /= z;

  std::vector<int> order(e);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (logits[a] != logits[b]) return logits[a] > logits[b];
    return a < b;  // ties by ascending index
  });

  GateSelection sel;
  sel.indices.assign(order.begin(), order.begin() + k);
  double mass = 0.0;
  for (int idx : sel.indices) mass += probs[static_cast<size_t>(idx)];
  for (int idx : sel.indices) {
    double w = probs[static_cast<size_t>(idx)];
    sel.weights.push_back(renormalize ? w / mass : w);
  }
  return sel;
}

namespace {

// Top-k indices and routing margin from raw logits; ties by ascending index.
std::pair<std::vector<int>, double> topk_from_logits(const std::vector<double>& logits, int k) {
  int e = static_cast<int>(logits.size());
  std::vector<int> order(e);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (logits[a] != logits[b]) return logits[a] > logits[b];
    return a < b;
  });
  std::vector<int> sel(order.begin(), order.begin() + k);
  double margin = k < e ? logits[order[k - 1]] - logits[order[k]]
                        : std::numeric_limits<double>::infinity();
  return {std::move(sel), margin};
}

}  // namespace

NodePtr moe_ffn_forward(const NodePtr& x, const MoEFFNParams& params, int k, bool renormalize,
                        RoutingTrace* trace) {
  const auto& shape = x->value.shape();
  if (shape.empty()) throw ParameterError("moe_ffn: input must have at least one dim");
  int d = shape.back();
  int e = static_cast<int>(params.experts.size());
  if (e < 1) throw ParameterError("moe_ffn: no experts");
  if (k < 1 || k > e) throw ParameterError("moe_ffn: require 1 <= k <= E");
  const Tensor& gw = params.gate.w->value;
  if (gw.ndim() != 2 || gw.dim(0) != e || gw.dim(1) != d) {
    throw ParameterError("moe_ffn: gate shape mismatch");
  }
  int64_t positions = x->value.size() / d;

  NodePtr flat = reshape(x, {static_cast<int>(positions), d});
  NodePtr gate_t = transpose_last2(params.gate.w);  // [D_h, E]
  // Transposed expert weights, built once per call.
  std::vector<NodePtr> w1t(params.experts.size()), w2t(params.experts.size());

  std::vector<NodePtr> rows;
  rows.reserve(static_cast<size_t>(positions));
  for (int64_t p = 0; p < positions; ++p) {
    NodePtr row = nn::slice(flat, 0, static_cast<int>(p), 1);  // [1, D_h]
    NodePtr logits = nn::matmul(row, gate_t);                  // [1, E]
    std::vector<double> logit_values(static_cast<size_t>(e));
    for (int i = 0; i < e; ++i) logit_values[static_cast<size_t>(i)] = logits->value[i];
    auto [selected, margin] = topk_from_logits(logit_values, k);
    if (trace) trace->events.push_back({selected, margin});

    NodePtr weights;  // [1, k]
    if (renormalize) {
      // softmax over the selected logits == full softmax renormalized on S
      weights = nn::softmax_lastdim(nn::gather_lastdim(logits, selected));
    } else {
      weights = nn::gather_lastdim(nn::softmax_lastdim(logits), selected);
    }

    NodePtr out;
    for (int j = 0; j < k; ++j) {
      int idx = selected[static_cast<size_t>(j)];
      const ExpertParams& ex = params.experts[static_cast<size_t>(idx)];
      if (!w1t[static_cast<size_t>(idx)]) {
        w1t[static_cast<size_t>(idx)] = transpose_last2(ex.w1);  // [D_h, D_ff]
        w2t[static_cast<size_t>(idx)] = transpose_last2(ex.w2);  // [D_ff, D_h]
      }
      NodePtr hidden = nn::gelu(nn::add(nn::matmul(row, w1t[static_cast<size_t>(idx)]), ex.b1));
      NodePtr ffn = nn::add(nn::matmul(hidden, w2t[static_cast<size_t>(idx)]), ex.b2);  // [1, D_h]
      NodePtr weighted = nn::mul(ffn, nn::slice(weights, 1, j, 1));
      out = out ? nn::add(out, weighted) : weighted;
    }
    rows.push_back(out);
  }
  NodePtr stacked = positions == 1 ? rows[0] : nn::concat(rows, 0);
  return reshape(stacked, shape);
}

Tensor moe_ffn_forward_value(const Tensor& x, const MoEFFNParams& params, int k,
                             bool renormalize) {
  NodePtr in = nn::constant(x);
  return moe_ffn_forward(in, params, k, renormalize)->value;
}

core::InstructionEmbedding filter_prefix_tokens(const core::InstructionEmbedding& emb) {
  std::vector<int> keep;
  for (int i = 0; i < emb.len; ++i) {
    if (!emb.is_prefix[static_cast<size_t>(i)]) keep.push_back(i);
  }
  if (keep.empty()) throw DataError("filter_prefix_tokens: every token is a prefix token");
  core::InstructionEmbedding out(static_cast<int>(keep.size()), emb.dim);
  for (size_t r = 0; r < keep.size(); ++r) {
    for (int j = 0; j < emb.dim; ++j) out.at(static_cast<int>(r), j) = emb.at(keep[r], j);
    out.is_prefix[r] = 0;
  }
  return out;
}

Tensor filter_prefix_tokens(const Tensor& tokens, const std::vector<uint8_t>& is_prefix) {
  if (tokens.ndim() != 2 || tokens.dim(0) != static_cast<int>(is_prefix.size())) {
    throw ParameterError("filter_prefix_tokens: mask length must equal token count");
  }
  std::vector<int> keep;
  for (size_t i = 0; i < is_prefix.size(); ++i) {
    if (!is_prefix[i]) keep.push_back(static_cast<int>(i));
  }
  if (keep.empty()) throw DataError("filter_prefix_tokens: every token is a prefix token");
  int d = tokens.dim(1);
  Tensor out({static_cast<int>(keep.size()), d});
  for (size_t r = 0; r < keep.size(); ++r) {
    for (int j = 0; j < d; ++j) out.at2(static_cast<int>(r), j) = tokens.at2(keep[r], j);
  }
  return out;
}

namespace {

// Multi-head softmax attention, bias-free projections. x_q: [b, Lq, D],
// x_kv: [b, Lk, D].
NodePtr softmax_attention(const NodePtr& x_q, const NodePtr& x_kv, const AttentionParams& p,
                          int n_heads) {
  int b = x_q->value.dim(0);
  int lq = x_q->value.dim(1);
  int d = x_q->value.dim(2);
  int lk = x_kv->value.dim(1);
  int dh = d / n_heads;
  NodePtr q = nn::matmul(x_q, p.wq);
  NodePtr k = nn::matmul(x_kv, p.wk);
  NodePtr v = nn::matmul(x_kv, p.wv);
  q = nn::permute(nn::reshape(q, {b, lq, n_heads, dh}), {0, 2, 1, 3});  // [b,H,Lq,dh]
  k = nn::permute(nn::reshape(k, {b, lk, n_heads, dh}), {0, 2, 1, 3});
  v = nn::permute(nn::reshape(v, {b, lk, n_heads, dh}), {0, 2, 1, 3});
  NodePtr scores = nn::scale(nn::matmul(q, nn::transpose_last2(k)), 1.0 / std::sqrt(dh));
  NodePtr attn = nn::softmax_lastdim(scores);
  NodePtr ctx = nn::matmul(attn, v);  // [b,H,Lq,dh]
  ctx = nn::reshape(nn::permute(ctx, {0, 2, 1, 3}), {b, lq, d});
  return nn::matmul(ctx, p.wo);
}

NodePtr apply_layer(const NodePtr& x, const EncDecLayerParams& layer, const NodePtr& memory,
                    const ConnectorConfig& cfg, RoutingTrace* trace) {
  NodePtr h = x;
  NodePtr normed = nn::layer_norm(h, layer.norm_self.gain, layer.norm_self.bias);
  h = nn::add(h, softmax_attention(normed, normed, layer.self_attn, cfg.n_heads));
  if (layer.cross_attn) {
    NodePtr qn = nn::layer_norm(h, layer.norm_cross.gain, layer.norm_cross.bias);
    h = nn::add(h, softmax_attention(qn, memory, *layer.cross_attn, cfg.n_heads));
  }
  NodePtr mn = nn::layer_norm(h, layer.norm_moe.gain, layer.norm_moe.bias);
  h = nn::add(h, moe_ffn_forward(mn, layer.moe, cfg.top_k, cfg.renormalize_weights, trace));
  return h;
}

}  // namespace

NodePtr connector_forward(const NodePtr& x_in, const ConnectorParams& params,
                          const ConnectorConfig& config, RoutingTrace* trace) {
  config.validate();
  const auto& shape = x_in->value.shape();
  if (shape.size() != 3 || shape[2] != config.d_in) {
    throw ParameterError("connector_forward: input must be [b, s, d_in]");
  }
  if (shape[1] < 1) throw ParameterError("connector_forward: sequence must be nonempty");
  int b = shape[0];

  // F_i: dimension-mapping FFN
  NodePtr h = nn::gelu(nn::add(nn::matmul(x_in, params.fi_w1), params.fi_b1));
  h = nn::add(nn::matmul(h, params.fi_w2), params.fi_b2);

  for (const auto& layer : params.enc_layers) {
    h = apply_layer(h, layer, nullptr, config, trace);
  }
  NodePtr memory = nn::layer_norm(h, params.enc_final_norm.gain, params.enc_final_norm.bias);

  NodePtr q = nn::tile_leading(params.q_l, b);  // [b, L_q, D_h]
  for (const auto& layer : params.dec_layers) {
    q = apply_layer(q, layer, memory, config, trace);
  }
  q = nn::layer_norm(q, params.dec_final_norm.gain, params.dec_final_norm.bias);
  return nn::add(nn::matmul(q, params.w_o), params.w_o_bias);
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

AttentionParams init_attention(const ConnectorConfig& c, core::Rng root, const std::string& p) {
  AttentionParams a;
  a.wq = init_weight({c.d_h, c.d_h}, c.d_h, root, p + ".Wq");
  a.wk = init_weight({c.d_h, c.d_h}, c.d_h, root, p + ".Wk");
  a.wv = init_weight({c.d_h, c.d_h}, c.d_h, root, p + ".Wv");
  a.wo = init_weight({c.d_h, c.d_h}, c.d_h, root, p + ".Wo");
  return a;
}

NormParams init_norm(const ConnectorConfig& c, const std::string& p) {
  return {init_ones({c.d_h}, p + ".gain"), init_zeros({c.d_h}, p + ".bias")};
}

MoEFFNParams init_moe(const ConnectorConfig& c, core::Rng root, const std::string& p) {
  MoEFFNParams m;
  m.gate.w = init_weight({c.n_experts, c.d_h}, c.d_h, root, p + ".gate.Wg");
  for (int i = 0; i < c.n_experts; ++i) {
    std::string ep = p + ".expert." + std::to_string(i);
    ExpertParams ex;
    ex.w1 = init_weight({c.d_ff, c.d_h}, c.d_h, root, ep + ".W1");
    ex.b1 = init_zeros({c.d_ff}, ep + ".b1");
    ex.w2 = init_weight({c.d_h, c.d_ff}, c.d_ff, root, ep + ".W2");
    ex.b2 = init_zeros({c.d_h}, ep + ".b2");
    m.experts.push_back(std::move(ex));
  }
  return m;
}

EncDecLayerParams init_layer(const ConnectorConfig& c, core::Rng root, const std::string& p,
                             bool with_cross) {
  EncDecLayerParams l;
  l.self_attn = init_attention(c, root, p + ".self_attn");
  l.norm_self = init_norm(c, p + ".norm_self");
  if (with_cross) {
    l.cross_attn = init_attention(c, root, p + ".cross_attn");
    l.norm_cross = init_norm(c, p + ".norm_cross");
  } else {
    // unused slots stay empty; keep norm handles null-free for serialization
    l.norm_cross = {nullptr, nullptr};
  }
  l.moe = init_moe(c, root, p + ".moe");
  l.norm_moe = init_norm(c, p + ".norm_moe");
  return l;
}

}  // namespace

ConnectorParams init_connector(const ConnectorConfig& config, uint64_t seed) {
  config.validate();
  core::Rng root(core::mix64(seed, core::fnv1a64("connector")));
  ConnectorParams p;
  p.fi_w1 = init_weight({config.d_in, config.d_h}, config.d_in, root, "fi.W1");
  p.fi_b1 = init_zeros({config.d_h}, "fi.b1");
  p.fi_w2 = init_weight({config.d_h, config.d_h}, config.d_h, root, "fi.W2");
  p.fi_b2 = init_zeros({config.d_h}, "fi.b2");
  for (int i = 0; i < config.n_enc_layers; ++i) {
    p.enc_layers.push_back(init_layer(config, root, "enc." + std::to_string(i), false));
  }
  for (int i = 0; i < config.n_dec_layers; ++i) {
    p.dec_layers.push_back(init_layer(config, root, "dec." + std::to_string(i), true));
  }
  {
    core::Rng rng = root.fork("Q_l");
    p.q_l = nn::leaf(Tensor::uniform_fan_in({config.l_q, config.d_h}, config.d_h, rng), true,
                     "Q_l");
  }
  p.enc_final_norm = init_norm(config, "enc.final_norm");
  p.dec_final_norm = init_norm(config, "dec.final_norm");
  // Zero-initialized output projection: the module starts invisible.
  p.w_o = init_zeros({config.d_h, config.d_out}, "W_o.W");
  p.w_o_bias = init_zeros({config.d_out}, "W_o.b");
  return p;
}

std::vector<std::pair<std::string, NodePtr>> ConnectorParams::named() const {
  std::vector<std::pair<std::string, NodePtr>> out;
  auto push = [&](const NodePtr& n) {
    if (n) out.emplace_back(n->name, n);
  };
  push(fi_w1);
  push(fi_b1);
  push(fi_w2);
  push(fi_b2);
  auto push_layer = [&](const EncDecLayerParams& l) {
    push(l.self_attn.wq);
    push(l.self_attn.wk);
    push(l.self_attn.wv);
    push(l.self_attn.wo);
    push(l.norm_self.gain);
    push(l.norm_self.bias);
    if (l.cross_attn) {
      push(l.cross_attn->wq);
      push(l.cross_attn->wk);
      push(l.cross_attn->wv);
      push(l.cross_attn->wo);
      push(l.norm_cross.gain);
      push(l.norm_cross.bias);
    }
    push(l.moe.gate.w);
    for (const auto& ex : l.moe.experts) {
      push(ex.w1);
      push(ex.b1);
      push(ex.w2);
      push(ex.b2);
    }
    push(l.norm_moe.gain);
    push(l.norm_moe.bias);
  };
  for (const auto& l : enc_layers) push_layer(l);
  for (const auto& l : dec_layers) push_layer(l);
  push(q_l);
  push(enc_final_norm.gain);
  push(enc_final_norm.bias);
  push(dec_final_norm.gain);
  push(dec_final_norm.bias);
  push(w_o);
  push(w_o_bias);
  return out;
}

std::vector<NodePtr> ConnectorParams::all() const {
  std::vector<NodePtr> out;
  for (auto& [name, node] : named()) out.push_back(node);
  return out;
}

std::vector<int64_t> expert_utilization(const Tensor& inputs, const MoEFFNParams& params,
                                        int k) {
  if (inputs.ndim() != 2) throw ParameterError("expert_utilization: inputs must be [P, D_h]");
  if (inputs.dim(0) < 1) throw ParameterError("expert_utilization: empty batch");
  int e = static_cast<int>(params.experts.size());
  std::vector<int64_t> hist(static_cast<size_t>(e), 0);
  int d = inputs.dim(1);
  for (int p = 0; p < inputs.dim(0); ++p) {
    Tensor row({d});
    for (int j = 0; j < d; ++j) row[j] = inputs.at2(p, j);
    GateSelection sel = gate_select(row, params.gate.w->value, k);
    for (int idx : sel.indices) ++hist[static_cast<size_t>(idx)];
  }
  return hist;
}

void save_connector(const ConnectorParams& params, const ConnectorConfig& config,
                    const std::filesystem::path& file) {
  nn::Archive ar;
  ar.put_string("__config__", config.to_json());
  for (const auto& [key, node] : params.named()) ar.put_tensor(key, node->value);
  ar.save(file);
}

std::pair<ConnectorParams, ConnectorConfig> load_connector(const std::filesystem::path& file) {
  nn::Archive ar = nn::Archive::load(file);
  ConnectorConfig config = ConnectorConfig::from_json(ar.get_string("__config__"));
  ConnectorParams params = init_connector(config, 0);
  for (auto& [key, node] : params.named()) {
    node->value = ar.get_tensor(key);
  }
  return {std::move(params), config};
}

}  // namespace ivedit::connector
