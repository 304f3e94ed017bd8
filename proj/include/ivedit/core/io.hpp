// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Persistence at the pixel boundary. Clips live on disk as directories of
// numbered binary PPM/PGM frames plus a meta.json record; in memory pixels
// are [0,1] floats, files are 8-bit. Pair manifests are JSON Lines with
// paths relative to the manifest's directory.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ivedit/core/types.hpp"

namespace ivedit::core {

// Deterministic 8-bit quantization used at every file boundary.
uint8_t quantize_u8(float v);
float dequantize_u8(uint8_t v);
// Snaps every pixel to the 8-bit grid, so a clip survives a save/load
// round trip bit-exactly.
VideoClip snap_to_u8_grid(VideoClip clip);

void save_clip(const VideoClip& clip, const std::filesystem::path& dir);
VideoClip load_clip(const std::filesystem::path& dir);

// Canonical single-buffer serialization (meta + quantized frames), used for
// content addressing.
std::vector<uint8_t> serialize_clip(const VideoClip& clip);

std::vector<uint8_t> serialize_mask_video(const MaskVideo& m);
MaskVideo deserialize_mask_video(const std::vector<uint8_t>& bytes);

// Manifest entry: a pair on disk. Clip paths are relative to the manifest.
struct ManifestPair {
  std::string id;
  Category category = Category::GlobalStyle;
  std::string instruction;
  std::optional<std::string> backward_instruction;
  std::string source_path;
  std::string target_path;
  int frames = 0;  // informational, filled when known
};

void save_pair_manifest(const std::vector<ManifestPair>& pairs,
                        const std::filesystem::path& file);
std::vector<ManifestPair> load_pair_manifest(const std::filesystem::path& file);

// Resolves the pair's clips against the manifest location.
EditPair load_edit_pair(const ManifestPair& entry, const std::filesystem::path& manifest_dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);
// Write-then-rename so concurrent readers never observe partial content.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace ivedit::core
