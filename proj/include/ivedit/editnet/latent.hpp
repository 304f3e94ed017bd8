// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Mock VAE: fixed linear spatial pooling by an integer factor. Pixel
// channels land in the first latent channels; decode inverts exactly on
// inputs that are constant over each s x s block.

#pragma once

#include "ivedit/core/types.hpp"
#include "ivedit/nn/tensor.hpp"

namespace ivedit::editnet {

struct LatentConfig {
  int spatial_factor = 4;
  int c_lat = 4;
};

core::LatentVideo encode_latent(const core::VideoClip& clip, const LatentConfig& cfg = {});
core::VideoClip decode_latent(const core::LatentVideo& latent, const LatentConfig& cfg,
                              int out_channels, float fps = 8.0f, const std::string& id = {});

// Channel concatenation [noisy | condition], both t x h x w x c.
nn::Tensor build_condition(const core::LatentVideo& src_latent, const core::LatentVideo& noisy);

nn::Tensor latent_to_tensor(const core::LatentVideo& l);
core::LatentVideo tensor_to_latent(const nn::Tensor& t);

}  // namespace ivedit::editnet
