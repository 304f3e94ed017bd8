// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ivedit::core {

// Hex-encoded SHA-256 of a byte buffer. Backs the content-addressed store.
std::string sha256_hex(const void* data, size_t len);
std::string sha256_hex(const std::string& data);
std::string sha256_hex(const std::vector<uint8_t>& data);

// Hex SHA-256 of a file's bytes.
std::string sha256_file_hex(const std::string& path);

}  // namespace ivedit::core
