// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/editnet/editor.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/rng.hpp"
#include "ivedit/core/text.hpp"

namespace ivedit::editnet {

using core::DataError;
using core::ParameterError;
using core::Rng;
using nn::NodePtr;
using nn::Tensor;
using json = nlohmann::json;

namespace {

// Hash-derived value in [-1, 1].
double hashed_unit(uint64_t h) {
  return (static_cast<double>(h >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

uint64_t clip_content_key(const core::VideoClip& clip) {
  // 4x4 grayscale means over all frames, quantized; cheap but content-sensitive
  uint64_t h = core::fnv1a64("clip");
  for (int gy = 0; gy < 4; ++gy) {
    for (int gx = 0; gx < 4; ++gx) {
      double acc = 0.0;
      int64_t n = 0;
      for (int f = 0; f < clip.t; ++f) {
        for (int y = gy * clip.h / 4; y < (gy + 1) * clip.h / 4; ++y) {
          for (int x = gx * clip.w / 4; x < (gx + 1) * clip.w / 4; ++x) {
            for (int c = 0; c < clip.c; ++c) {
              acc += clip.at(f, y, x, c);
              ++n;
            }
          }
        }
      }
      uint64_t q = static_cast<uint64_t>((acc / std::max<int64_t>(n, 1)) * 4096.0);
      h = core::mix64(h, q);
    }
  }
  return h;
}

}  // namespace

core::InstructionEmbedding mock_text_encoder(const std::string& instruction,
                                             const MockEncoderConfig& cfg) {
  std::vector<std::string> words;
  std::istringstream ss(instruction);
  std::string word;
  while (ss >> word && static_cast<int>(words.size()) < cfg.max_text_tokens) {
    words.push_back(word);
  }
  int n = cfg.n_prefix + std::max<int>(1, static_cast<int>(words.size()));
  core::InstructionEmbedding emb(n, cfg.d_text);
  for (int i = 0; i < cfg.n_prefix; ++i) {
    emb.is_prefix[static_cast<size_t>(i)] = 1;
    Rng rng(core::mix64(cfg.seed, core::fnv1a64("text-prefix-" + std::to_string(i))));
    for (int j = 0; j < cfg.d_text; ++j) emb.at(i, j) = hashed_unit(rng.next_u64());
  }
  for (int i = cfg.n_prefix; i < n; ++i) {
    size_t wi = static_cast<size_t>(i - cfg.n_prefix);
    std::string content = wi < words.size() ? words[wi] : std::string("<empty>");
    Rng rng(core::mix64(cfg.seed, core::fnv1a64("text-word-" + content)));
    for (int j = 0; j < cfg.d_text; ++j) emb.at(i, j) = hashed_unit(rng.next_u64());
  }
  return emb;
}

MllmFeatures mock_mllm(const core::VideoClip& source, const std::string& instruction,
                       const MockEncoderConfig& cfg) {
  uint64_t content = clip_content_key(source);
  uint64_t instr = core::fnv1a64(instruction);
  int n_text = std::min<int>(cfg.max_text_tokens, std::max(1, core::word_count(instruction)));
  int s = cfg.n_prefix + cfg.n_visual + n_text;
  MllmFeatures out;
  out.hidden = Tensor({s, cfg.d_in});
  out.is_prefix.assign(static_cast<size_t>(s), 0);
  for (int i = 0; i < s; ++i) {
    uint64_t token_key;
    if (i < cfg.n_prefix) {
      out.is_prefix[static_cast<size_t>(i)] = 1;
      token_key = core::mix64(core::fnv1a64("mllm-prefix"), static_cast<uint64_t>(i));
    } else if (i < cfg.n_prefix + cfg.n_visual) {
      token_key = core::mix64(core::mix64(content, instr), static_cast<uint64_t>(i));
    } else {
      token_key = core::mix64(instr, static_cast<uint64_t>(i));
    }
    Rng rng(core::mix64(cfg.seed, token_key));
    for (int j = 0; j < cfg.d_in; ++j) {
      out.hidden.at2(i, j) = hashed_unit(rng.next_u64());
    }
  }
  return out;
}

EditorConfig EditorConfig::desk_default() {
  EditorConfig c;
  c.latent = {4, 4};
  c.denoiser = {};
  c.denoiser.t = 8;
  c.denoiser.h = 8;
  c.denoiser.w = 8;
  c.denoiser.c_lat = 4;
  c.denoiser.d_model = 32;
  c.denoiser.n_blocks = 2;
  c.denoiser.n_heads = 4;
  c.denoiser.d_ff = 64;
  c.denoiser.d_ctx = 32;
  c.connector = {};
  c.connector.d_in = 24;
  c.connector.d_h = 16;
  c.connector.d_out = 32;
  c.connector.l_q = 8;
  c.connector.n_enc_layers = 2;
  c.connector.n_dec_layers = 2;
  c.connector.n_experts = 6;
  c.connector.top_k = 2;
  c.connector.d_ff = 32;
  c.connector.n_heads = 2;
  c.encoders = {};
  return c;
}

void EditorConfig::validate() const {
  denoiser.validate();
  connector.validate();
  if (connector.d_out != denoiser.d_ctx) {
    throw ParameterError("editor config: connector d_out must equal denoiser d_ctx");
  }
  if (connector.d_in != encoders.d_in) {
    throw ParameterError("editor config: connector d_in must equal mock MLLM dim");
  }
  if (clip_h % latent.spatial_factor != 0 || clip_w % latent.spatial_factor != 0) {
    throw ParameterError("editor config: latent factor must divide clip extent");
  }
  if (denoiser.t != clip_t || denoiser.h != clip_h / latent.spatial_factor ||
      denoiser.w != clip_w / latent.spatial_factor || denoiser.c_lat != latent.c_lat) {
    throw ParameterError("editor config: denoiser geometry must match encoded latents");
  }
}

std::string EditorConfig::to_json() const {
  json j{{"latent", {{"spatial_factor", latent.spatial_factor}, {"c_lat", latent.c_lat}}},
         {"denoiser",
          {{"t", denoiser.t},
           {"h", denoiser.h},
           {"w", denoiser.w},
           {"c_lat", denoiser.c_lat},
           {"patch_h", denoiser.patch_h},
           {"patch_w", denoiser.patch_w},
           {"d_model", denoiser.d_model},
           {"n_blocks", denoiser.n_blocks},
           {"n_heads", denoiser.n_heads},
           {"d_ff", denoiser.d_ff},
           {"d_ctx", denoiser.d_ctx}}},
         {"connector", json::parse(connector.to_json())},
         {"encoders",
          {{"d_text", encoders.d_text},
           {"d_in", encoders.d_in},
           {"n_prefix", encoders.n_prefix},
           {"n_visual", encoders.n_visual},
           {"max_text_tokens", encoders.max_text_tokens},
           {"seed", encoders.seed}}},
         {"clip_t", clip_t},
         {"clip_h", clip_h},
         {"clip_w", clip_w},
         {"clip_c", clip_c},
         {"lr", lr},
         {"seed", seed}};
  return j.dump();
}

EditorConfig EditorConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  EditorConfig c;
  c.latent.spatial_factor = j.at("latent").at("spatial_factor");
  c.latent.c_lat = j.at("latent").at("c_lat");
  const auto& d = j.at("denoiser");
  c.denoiser.t = d.at("t");
  c.denoiser.h = d.at("h");
  c.denoiser.w = d.at("w");
  c.denoiser.c_lat = d.at("c_lat");
  c.denoiser.patch_h = d.at("patch_h");
  c.denoiser.patch_w = d.at("patch_w");
  c.denoiser.d_model = d.at("d_model");
  c.denoiser.n_blocks = d.at("n_blocks");
  c.denoiser.n_heads = d.at("n_heads");
  c.denoiser.d_ff = d.at("d_ff");
  c.denoiser.d_ctx = d.at("d_ctx");
  c.connector = connector::ConnectorConfig::from_json(j.at("connector").dump());
  const auto& e = j.at("encoders");
  c.encoders.d_text = e.at("d_text");
  c.encoders.d_in = e.at("d_in");
  c.encoders.n_prefix = e.at("n_prefix");
  c.encoders.n_visual = e.at("n_visual");
  c.encoders.max_text_tokens = e.at("max_text_tokens");
  c.encoders.seed = e.at("seed");
  c.clip_t = j.at("clip_t");
  c.clip_h = j.at("clip_h");
  c.clip_w = j.at("clip_w");
  c.clip_c = j.at("clip_c");
  c.lr = j.at("lr");
  c.seed = j.at("seed");
  c.validate();
  return c;
}

EditorState init_editor(const EditorConfig& cfg) {
  cfg.validate();
  EditorState st;
  st.cfg = cfg;
  st.connector_params = connector::init_connector(cfg.connector, cfg.seed);
  st.denoiser_params = init_denoiser(cfg.denoiser, cfg.seed);
  Rng rng(core::mix64(cfg.seed, core::fnv1a64("text_proj")));
  st.text_proj = Tensor::uniform_fan_in({cfg.encoders.d_text, cfg.denoiser.d_ctx},
                                        cfg.encoders.d_text, rng);
  std::vector<NodePtr> params = st.connector_params.all();
  for (auto& p : st.denoiser_params.all()) params.push_back(p);
  st.optimizer = std::make_unique<nn::AdamOptimizer>(
      params, nn::AdamOptimizer::Config{.lr = cfg.lr, .beta1 = 0.9, .beta2 = 0.999,
                                        .eps = 1e-8});
  return st;
}

TrainSample make_train_sample(const core::EditPair& pair, const EditorConfig& cfg) {
  TrainSample s;
  s.pair = pair;
  s.text = mock_text_encoder(pair.instruction, cfg.encoders);
  s.mllm = mock_mllm(pair.source, pair.instruction, cfg.encoders);
  return s;
}

NodePtr build_context(const NodePtr& text_tokens, const NodePtr& connector_out) {
  if (text_tokens->value.ndim() != 3 || connector_out->value.ndim() != 3) {
    throw ParameterError("build_context: expected [b, L, d] token tensors");
  }
  if (text_tokens->value.dim(0) != connector_out->value.dim(0) ||
      text_tokens->value.dim(2) != connector_out->value.dim(2)) {
    throw ParameterError("build_context: batch and feature dims must match");
  }
  return nn::concat({text_tokens, connector_out}, 1);
}

Tensor build_context(const Tensor& text_tokens, const Tensor& connector_out) {
  return build_context(nn::constant(text_tokens), nn::constant(connector_out))->value;
}

Tensor project_text_tokens(const core::InstructionEmbedding& text, const Tensor& text_proj) {
  core::InstructionEmbedding kept = connector::filter_prefix_tokens(text);
  Tensor tokens({1, kept.len, kept.dim});
  std::copy(kept.tokens.begin(), kept.tokens.end(), tokens.data());
  return nn::matmul(nn::constant(tokens), nn::constant(text_proj))->value;
}

namespace {

struct SampleGraph {
  NodePtr pred;    // [1,t,h,w,c]
  NodePtr target;  // velocity target, constant
};

NodePtr connector_context(const TrainSample& s, EditorState& state, bool with_connector,
                          connector::RoutingTrace* trace) {
  const EditorConfig& cfg = state.cfg;
  Tensor text = project_text_tokens(s.text, state.text_proj);
  NodePtr text_node = nn::constant(text);
  if (!with_connector) return text_node;
  Tensor filtered = connector::filter_prefix_tokens(s.mllm.hidden, s.mllm.is_prefix);
  Tensor x_in = filtered.reshaped({1, filtered.dim(0), filtered.dim(1)});
  NodePtr conn_out = connector::connector_forward(nn::constant(x_in), state.connector_params,
                                                  cfg.connector, trace);
  return build_context(text_node, conn_out);
}

}  // namespace

Tensor editor_denoise(const core::VideoClip& source, const std::string& instruction,
                      const Tensor& noisy_latent, double t, EditorState& state,
                      bool with_connector) {
  const EditorConfig& cfg = state.cfg;
  core::EditPair probe;
  probe.source = source;
  probe.target = source;
  probe.instruction = instruction;
  TrainSample s = make_train_sample(probe, cfg);
  NodePtr ctx = connector_context(s, state, with_connector, nullptr);
  core::LatentVideo src_lat = encode_latent(source, cfg.latent);
  Tensor cond = build_condition(src_lat, tensor_to_latent(noisy_latent));
  std::vector<int> cshape = cond.shape();
  cshape.insert(cshape.begin(), 1);
  NodePtr out = denoiser_forward(nn::constant(cond.reshaped(cshape)), ctx, {t},
                                 state.denoiser_params, cfg.denoiser);
  const auto& os = out->value.shape();
  return out->value.reshaped({os[1], os[2], os[3], os[4]});
}

StepStats training_step(const std::vector<TrainSample>& batch, EditorState& state) {
  if (batch.empty()) throw ParameterError("training_step: empty batch");
  const EditorConfig& cfg = state.cfg;
  Rng step_rng(core::mix64(cfg.seed, core::mix64(core::fnv1a64("train-step"),
                                                 static_cast<uint64_t>(state.step))));
  connector::RoutingTrace trace;
  std::vector<NodePtr> losses;
  losses.reserve(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    const TrainSample& s = batch[i];
    Rng rng = step_rng.fork(static_cast<uint64_t>(i));
    core::LatentVideo src_lat = encode_latent(s.pair.source, cfg.latent);
    core::LatentVideo tgt_lat = encode_latent(s.pair.target, cfg.latent);
    double t = rng.next_double();
    Tensor target = latent_to_tensor(tgt_lat);
    Tensor eps(target.shape());
    for (int64_t j = 0; j < eps.size(); ++j) eps[j] = rng.next_normal();
    Tensor x_t(target.shape());
    Tensor velocity(target.shape());
    for (int64_t j = 0; j < x_t.size(); ++j) {
      x_t[j] = (1.0 - t) * target[j] + t * eps[j];
      velocity[j] = eps[j] - target[j];
    }
    Tensor cond = build_condition(src_lat, tensor_to_latent(x_t));
    std::vector<int> cshape = cond.shape();
    cshape.insert(cshape.begin(), 1);
    NodePtr ctx = connector_context(s, state, true, &trace);
    NodePtr pred = denoiser_forward(nn::constant(cond.reshaped(cshape)), ctx, {t},
                                    state.denoiser_params, cfg.denoiser);
    std::vector<int> vshape = velocity.shape();
    vshape.insert(vshape.begin(), 1);
    losses.push_back(nn::mse(pred, nn::constant(velocity.reshaped(vshape))));
  }
  NodePtr loss = losses.size() == 1
                     ? losses[0]
                     : nn::scale(nn::sum_all(nn::concat(losses, 0)),
                                 1.0 / static_cast<double>(losses.size()));
  double loss_value = loss->value[0];
  if (!std::isfinite(loss_value)) {
    throw DataError("training_step: non-finite loss at step " + std::to_string(state.step));
  }
  nn::backward(loss);
  StepStats stats;
  stats.loss = loss_value;
  if (state.connector_params.w_o->grad.size() == state.connector_params.w_o->value.size()) {
    stats.w_o_grad_max_abs = state.connector_params.w_o->grad.max_abs();
  }
  stats.expert_histogram = trace.histogram(cfg.connector.n_experts);
  state.optimizer->step();
  ++state.step;
  for (const auto& [key, node] : state.connector_params.named()) {
    if (!node->value.all_finite()) throw DataError("training_step: non-finite param " + key);
  }
  for (const auto& [key, node] : state.denoiser_params.named()) {
    if (!node->value.all_finite()) throw DataError("training_step: non-finite param " + key);
  }
  return stats;
}

core::VideoClip sample_edit(const core::VideoClip& source, const std::string& instruction,
                            int steps, EditorState& state, uint64_t seed) {
  if (steps < 1) throw ParameterError("sample_edit: steps must be >= 1");
  const EditorConfig& cfg = state.cfg;
  Rng rng(core::mix64(seed, core::fnv1a64("sample")));
  Tensor x({cfg.denoiser.t, cfg.denoiser.h, cfg.denoiser.w, cfg.denoiser.c_lat});
  for (int64_t i = 0; i < x.size(); ++i) x[i] = rng.next_normal();
  double dt = 1.0 / steps;
  for (int k = steps; k >= 1; --k) {
    double t = static_cast<double>(k) / steps;
    Tensor v = editor_denoise(source, instruction, x, t, state, true);
    for (int64_t i = 0; i < x.size(); ++i) x[i] -= dt * v[i];
  }
  core::LatentVideo lat = tensor_to_latent(x);
  core::VideoClip out = decode_latent(lat, cfg.latent, source.c, source.fps,
                                      source.id + "/edited");
  return out;
}

void save_checkpoint(const EditorState& state, const std::filesystem::path& file) {
  nn::Archive ar;
  ar.put_string("__config__", state.cfg.to_json());
  ar.put_string("__step__", std::to_string(state.step));
  for (const auto& [key, node] : state.connector_params.named()) {
    ar.put_tensor("connector." + key, node->value);
  }
  for (const auto& [key, node] : state.denoiser_params.named()) {
    ar.put_tensor("denoiser." + key, node->value);
  }
  ar.put_tensor("text_proj", state.text_proj);
  const auto& params = state.optimizer->params();
  const auto& m1 = state.optimizer->moment1();
  const auto& m2 = state.optimizer->moment2();
  for (size_t i = 0; i < params.size(); ++i) {
    ar.put_tensor("adam.m." + std::to_string(i), m1[i]);
    ar.put_tensor("adam.v." + std::to_string(i), m2[i]);
  }
  ar.put_string("adam.steps", std::to_string(state.optimizer->step_count()));
  ar.save(file);
}

EditorState load_checkpoint(const std::filesystem::path& file) {
  nn::Archive ar = nn::Archive::load(file);
  EditorConfig cfg = EditorConfig::from_json(ar.get_string("__config__"));
  EditorState st = init_editor(cfg);
  st.step = std::stoll(ar.get_string("__step__"));
  for (auto& [key, node] : st.connector_params.named()) {
    node->value = ar.get_tensor("connector." + key);
  }
  for (auto& [key, node] : st.denoiser_params.named()) {
    node->value = ar.get_tensor("denoiser." + key);
  }
  st.text_proj = ar.get_tensor("text_proj");
  auto& m1 = st.optimizer->moment1();
  auto& m2 = st.optimizer->moment2();
  for (size_t i = 0; i < st.optimizer->params().size(); ++i) {
    m1[i] = ar.get_tensor("adam.m." + std::to_string(i));
    m2[i] = ar.get_tensor("adam.v." + std::to_string(i));
  }
  st.optimizer->set_step_count(std::stoll(ar.get_string("adam.steps")));
  return st;
}

}  // namespace ivedit::editnet
