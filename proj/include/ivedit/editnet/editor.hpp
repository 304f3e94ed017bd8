// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Full editing model: mock MLLM features -> prefix filter -> MoE connector;
// instruction tokens -> fixed projection; both fused along the token
// dimension as the denoiser's cross-attention context. Trained with a
// rectified-flow objective (x_t = (1-t) x_target + t eps, velocity target
// v = eps - x_target) and sampled by Euler integration from pure noise.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "ivedit/connector/connector.hpp"
#include "ivedit/core/types.hpp"
#include "ivedit/editnet/denoiser.hpp"
#include "ivedit/editnet/latent.hpp"
#include "ivedit/nn/optim.hpp"

namespace ivedit::editnet {

struct MockEncoderConfig {
  int d_text = 16;
  int d_in = 24;        // mock MLLM hidden dim
  int n_prefix = 2;     // declared prefix region (system/template tokens)
  int n_visual = 4;     // tokens derived from downsampled source frames
  int max_text_tokens = 12;
  uint64_t seed = 1;
};

// Deterministic instruction-token embedding (text-encoder stand-in); the
// first n_prefix tokens are flagged as prefix tokens.
core::InstructionEmbedding mock_text_encoder(const std::string& instruction,
                                             const MockEncoderConfig& cfg);

struct MllmFeatures {
  nn::Tensor hidden;               // [s, d_in]
  std::vector<uint8_t> is_prefix;  // length s
};

// Deterministic feature hash over (downsampled source frames, instruction
// bytes) with a declared prefix region.
MllmFeatures mock_mllm(const core::VideoClip& source, const std::string& instruction,
                       const MockEncoderConfig& cfg);

struct TrainSample {
  core::EditPair pair;
  core::InstructionEmbedding text;
  MllmFeatures mllm;
};

struct EditorConfig {
  LatentConfig latent;
  DenoiserConfig denoiser;
  connector::ConnectorConfig connector;
  MockEncoderConfig encoders;
  int clip_t = 8, clip_h = 32, clip_w = 32, clip_c = 3;
  double lr = 1e-3;  // toy default; reference recipe uses 1e-5 then 1e-6
  uint64_t seed = 7;

  // Desk profile: 8x32x32x3 clips, latent 8x8x8x4, d_out 32, L_q 8.
  static EditorConfig desk_default();
  void validate() const;
  std::string to_json() const;
  static EditorConfig from_json(const std::string& text);
};

struct EditorState {
  EditorConfig cfg;
  connector::ConnectorParams connector_params;
  DenoiserParams denoiser_params;
  nn::Tensor text_proj;  // fixed [d_text, d_ctx] map, not trained
  std::unique_ptr<nn::AdamOptimizer> optimizer;
  int64_t step = 0;
};

EditorState init_editor(const EditorConfig& cfg);

TrainSample make_train_sample(const core::EditPair& pair, const EditorConfig& cfg);

// Token-dimension fusion: text tokens first, connector tokens appended.
nn::NodePtr build_context(const nn::NodePtr& text_tokens, const nn::NodePtr& connector_out);
nn::Tensor build_context(const nn::Tensor& text_tokens, const nn::Tensor& connector_out);

// Projected, prefix-filtered instruction tokens for one sample: [1, Lt, d_ctx].
nn::Tensor project_text_tokens(const core::InstructionEmbedding& text,
                               const nn::Tensor& text_proj);

struct StepStats {
  double loss = 0.0;
  double w_o_grad_max_abs = 0.0;
  std::vector<int64_t> expert_histogram;
};

// One optimizer step over the batch; loss is the mean of per-sample
// rectified-flow MSEs. Throws DataError on a non-finite loss.
StepStats training_step(const std::vector<TrainSample>& batch, EditorState& state);

// Deterministic per seed. Output clip has the source geometry.
core::VideoClip sample_edit(const core::VideoClip& source, const std::string& instruction,
                            int steps, EditorState& state, uint64_t seed);

// Full-editor denoise for one sample; with_connector=false masks the
// connector tokens out of the context entirely (baseline graph).
nn::Tensor editor_denoise(const core::VideoClip& source, const std::string& instruction,
                          const nn::Tensor& noisy_latent, double t, EditorState& state,
                          bool with_connector);

void save_checkpoint(const EditorState& state, const std::filesystem::path& file);
EditorState load_checkpoint(const std::filesystem::path& file);

}  // namespace ivedit::editnet
