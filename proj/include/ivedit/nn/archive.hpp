// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Single-file archive of named tensors and raw blobs. Binary layout (all
// integers little-endian):
//   magic  "IVAR1\n"
//   u32    entry count
//   entry: u16 name length, name bytes,
//          u8  kind (0 = f64 tensor, 1 = raw bytes),
//          tensor: u8 ndim, i32 dims..., f64 payload
//          bytes:  u64 length, payload
// Entries are written in sorted key order so archives are byte-stable.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ivedit/nn/tensor.hpp"

namespace ivedit::nn {

class Archive {
 public:
  void put_tensor(const std::string& key, const Tensor& t);
  void put_bytes(const std::string& key, std::vector<uint8_t> bytes);
  void put_string(const std::string& key, const std::string& s);

  const Tensor& get_tensor(const std::string& key) const;
  const std::vector<uint8_t>& get_bytes(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  bool has(const std::string& key) const;
  std::vector<std::string> keys() const;

  // Atomic: writes to a temp file then renames.
  void save(const std::filesystem::path& file) const;
  static Archive load(const std::filesystem::path& file);

 private:
  std::map<std::string, Tensor> tensors_;
  std::map<std::string, std::vector<uint8_t>> blobs_;
};

}  // namespace ivedit::nn
