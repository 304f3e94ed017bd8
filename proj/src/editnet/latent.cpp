// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/editnet/latent.hpp"

#include <algorithm>

#include "ivedit/core/errors.hpp"

namespace ivedit::editnet {

using core::LatentVideo;
using core::ParameterError;
using core::VideoClip;

LatentVideo encode_latent(const VideoClip& clip, const LatentConfig& cfg) {
  int s = cfg.spatial_factor;
  if (s < 1) throw ParameterError("encode_latent: spatial factor must be >= 1");
  if (clip.h % s != 0 || clip.w % s != 0) {
    throw ParameterError("encode_latent: H and W must be divisible by the spatial factor");
  }
  if (cfg.c_lat < clip.c) {
    throw ParameterError("encode_latent: c_lat must be >= clip channels");
  }
  LatentVideo out(clip.t, clip.h / s, clip.w / s, cfg.c_lat);
  double inv = 1.0 / (s * s);
  for (int f = 0; f < clip.t; ++f) {
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) {
        for (int ch = 0; ch < clip.c; ++ch) {
          double acc = 0.0;
          for (int dy = 0; dy < s; ++dy) {
            for (int dx = 0; dx < s; ++dx) {
              acc += clip.at(f, y * s + dy, x * s + dx, ch);
            }
          }
          out.at(f, y, x, ch) = acc * inv;
        }
      }
    }
  }
  return out;
}

VideoClip decode_latent(const LatentVideo& latent, const LatentConfig& cfg, int out_channels,
                        float fps, const std::string& id) {
  int s = cfg.spatial_factor;
  if (out_channels > latent.c) {
    throw ParameterError("decode_latent: more output channels than latent channels");
  }
  VideoClip clip(latent.t, latent.h * s, latent.w * s, out_channels, fps, id);
  for (int f = 0; f < latent.t; ++f) {
    for (int y = 0; y < clip.h; ++y) {
      for (int x = 0; x < clip.w; ++x) {
        for (int ch = 0; ch < out_channels; ++ch) {
          double v = latent.at(f, y / s, x / s, ch);
          clip.at(f, y, x, ch) = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
      }
    }
  }
  return clip;
}

nn::Tensor build_condition(const LatentVideo& src_latent, const LatentVideo& noisy) {
  if (src_latent.t != noisy.t || src_latent.h != noisy.h || src_latent.w != noisy.w) {
    throw ParameterError("build_condition: latent geometries differ");
  }
  nn::Tensor out({noisy.t, noisy.h, noisy.w, noisy.c + src_latent.c});
  int64_t i = 0;
  for (int f = 0; f < noisy.t; ++f) {
    for (int y = 0; y < noisy.h; ++y) {
      for (int x = 0; x < noisy.w; ++x) {
        for (int ch = 0; ch < noisy.c; ++ch) out[i++] = noisy.at(f, y, x, ch);
        for (int ch = 0; ch < src_latent.c; ++ch) out[i++] = src_latent.at(f, y, x, ch);
      }
    }
  }
  return out;
}

nn::Tensor latent_to_tensor(const LatentVideo& l) {
  nn::Tensor t({l.t, l.h, l.w, l.c});
  std::copy(l.data.begin(), l.data.end(), t.data());
  return t;
}

LatentVideo tensor_to_latent(const nn::Tensor& t) {
  if (t.ndim() != 4) throw ParameterError("tensor_to_latent: expected rank-4 tensor");
  LatentVideo l(t.dim(0), t.dim(1), t.dim(2), t.dim(3));
  std::copy(t.data(), t.data() + t.size(), l.data.begin());
  return l;
}

}  // namespace ivedit::editnet
