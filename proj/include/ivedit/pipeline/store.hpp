// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Content-addressed artifact store. Artifacts are named by the SHA-256 of
// their canonical serialization, so identical content dedupes, reruns are
// no-ops, and a tree checksum detects any drift. Clips live as directories
// of numbered image frames plus meta.json under clips/<hash>; raw blobs and
// JSON documents live under objects/<hh>/<hash>.
//
// Concurrent writers are safe: every write goes to a temp name and renames
// into place, and identical content maps to identical paths.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivedit/core/io.hpp"
#include "ivedit/core/types.hpp"

namespace ivedit::pipeline {

class ArtifactStore {
 public:
  explicit ArtifactStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // All puts return store-relative refs.
  std::string put_bytes(const std::vector<uint8_t>& bytes, std::string_view ext = "bin");
  std::string put_json(const nlohmann::json& doc);
  std::string put_clip(const core::VideoClip& clip);
  std::string put_mask(const core::MaskVideo& mask);

  std::vector<uint8_t> get_bytes(const std::string& ref) const;
  nlohmann::json get_json(const std::string& ref) const;
  core::VideoClip get_clip(const std::string& ref) const;
  core::MaskVideo get_mask(const std::string& ref) const;

  bool exists(const std::string& ref) const;
  std::filesystem::path resolve(const std::string& ref) const;

  // SHA-256 over the sorted (path, content-hash) listing of the whole tree.
  std::string tree_checksum() const;

 private:
  std::filesystem::path root_;
};

}  // namespace ivedit::pipeline
