// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/pipeline/store.hpp"

#include <algorithm>
#include <fstream>

#include "ivedit/core/errors.hpp"
#include "ivedit/core/hash.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ivedit::pipeline {

using core::IoError;

ArtifactStore::ArtifactStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "objects");
  fs::create_directories(root_ / "clips");
}

fs::path ArtifactStore::resolve(const std::string& ref) const { return root_ / ref; }

bool ArtifactStore::exists(const std::string& ref) const { return fs::exists(resolve(ref)); }

std::string ArtifactStore::put_bytes(const std::vector<uint8_t>& bytes, std::string_view ext) {
  std::string hash = core::sha256_hex(bytes);
  std::string ref = "objects/" + hash.substr(0, 2) + "/" + hash + "." + std::string(ext);
  fs::path target = resolve(ref);
  if (fs::exists(target)) return ref;
  fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(reinterpret_cast<uintptr_t>(&bytes));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("store: cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec && !fs::exists(target)) throw IoError("store: rename failed for " + target.string());
  if (ec) fs::remove(tmp, ec);
  return ref;
}

std::string ArtifactStore::put_json(const json& doc) {
  std::string text = doc.dump(2);
  std::vector<uint8_t> bytes(text.begin(), text.end());
  return put_bytes(bytes, "json");
}

std::string ArtifactStore::put_clip(const core::VideoClip& clip) {
  core::VideoClip snapped = core::snap_to_u8_grid(clip);
  std::string hash = core::sha256_hex(core::serialize_clip(snapped));
  std::string ref = "clips/" + hash.substr(0, 16);
  fs::path target = resolve(ref);
  if (fs::exists(target)) return ref;
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(reinterpret_cast<uintptr_t>(&clip));
  core::save_clip(snapped, tmp);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    if (!fs::exists(target)) throw IoError("store: rename failed for " + target.string());
    fs::remove_all(tmp, ec);
  }
  return ref;
}

std::string ArtifactStore::put_mask(const core::MaskVideo& mask) {
  return put_bytes(core::serialize_mask_video(mask), "mask");
}

std::vector<uint8_t> ArtifactStore::get_bytes(const std::string& ref) const {
  std::ifstream in(resolve(ref), std::ios::binary);
  if (!in) throw IoError("store: missing artifact " + ref);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

json ArtifactStore::get_json(const std::string& ref) const {
  auto bytes = get_bytes(ref);
  return json::parse(bytes.begin(), bytes.end());
}

core::VideoClip ArtifactStore::get_clip(const std::string& ref) const {
  fs::path dir = resolve(ref);
  if (!fs::exists(dir / "meta.json")) throw IoError("store: missing clip " + ref);
  return core::load_clip(dir);
}

core::MaskVideo ArtifactStore::get_mask(const std::string& ref) const {
  return core::deserialize_mask_video(get_bytes(ref));
}

std::string ArtifactStore::tree_checksum() const {
  std::vector<std::string> entries;
  for (const auto& e : fs::recursive_directory_iterator(root_)) {
    if (!e.is_regular_file()) continue;
    std::string rel = fs::relative(e.path(), root_).generic_string();
    entries.push_back(rel + ":" + core::sha256_file_hex(e.path().string()));
  }
  std::sort(entries.begin(), entries.end());
  std::string joined;
  for (const auto& s : entries) {
    joined += s;
    joined += '\n';
  }
  return core::sha256_hex(joined);
}

}  // namespace ivedit::pipeline
