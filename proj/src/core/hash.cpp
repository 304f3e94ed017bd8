// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/core/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>

#include "ivedit/core/errors.hpp"

namespace ivedit::core {

namespace {

std::string to_hex(const unsigned char* digest, unsigned len) {
  static const char* hex = "0123456789abcdef";
  std::string out(len * 2, '0');
  for (unsigned i = 0; i < len; ++i) {
    out[2 * i] = hex[digest[i] >> 4];
    out[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace

std::string sha256_hex(const void* data, size_t len) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned digest_len = 0;
  if (EVP_Digest(data, len, digest.data(), &digest_len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256: digest computation failed");
  }
  return to_hex(digest.data(), digest_len);
}

std::string sha256_hex(const std::string& data) { return sha256_hex(data.data(), data.size()); }

std::string sha256_hex(const std::vector<uint8_t>& data) {
  return sha256_hex(data.data(), data.size());
}

std::string sha256_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("sha256: cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 65536> buf;
  while (in.good()) {
    in.read(buf.data(), buf.size());
    std::streamsize n = in.gcount();
    if (n > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<size_t>(n));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned digest_len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &digest_len);
  EVP_MD_CTX_free(ctx);
  return to_hex(digest.data(), digest_len);
}

}  // namespace ivedit::core
