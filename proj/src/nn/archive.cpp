// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/nn/archive.hpp"

#include <cstring>
#include <fstream>

#include "ivedit/core/errors.hpp"

namespace fs = std::filesystem;

namespace ivedit::nn {

using core::IoError;

namespace {

constexpr char kMagic[6] = {'I', 'V', 'A', 'R', '1', '\n'};

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("archive: truncated read");
  return v;
}

}  // namespace

void Archive::put_tensor(const std::string& key, const Tensor& t) { tensors_[key] = t; }

void Archive::put_bytes(const std::string& key, std::vector<uint8_t> bytes) {
  blobs_[key] = std::move(bytes);
}

void Archive::put_string(const std::string& key, const std::string& s) {
  blobs_[key] = std::vector<uint8_t>(s.begin(), s.end());
}

const Tensor& Archive::get_tensor(const std::string& key) const {
  auto it = tensors_.find(key);
  if (it == tensors_.end()) throw IoError("archive: missing tensor " + key);
  return it->second;
}

const std::vector<uint8_t>& Archive::get_bytes(const std::string& key) const {
  auto it = blobs_.find(key);
  if (it == blobs_.end()) throw IoError("archive: missing blob " + key);
  return it->second;
}

std::string Archive::get_string(const std::string& key) const {
  const auto& b = get_bytes(key);
  return std::string(b.begin(), b.end());
}

bool Archive::has(const std::string& key) const {
  return tensors_.count(key) > 0 || blobs_.count(key) > 0;
}

std::vector<std::string> Archive::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : tensors_) out.push_back(k);
  for (const auto& [k, _] : blobs_) out.push_back(k);
  return out;
}

void Archive::save(const fs::path& file) const {
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("archive: cannot write " + tmp.string());
    out.write(kMagic, sizeof(kMagic));
    write_pod<uint32_t>(out, static_cast<uint32_t>(tensors_.size() + blobs_.size()));
    // std::map iteration is already sorted by key; tensors first, then blobs,
    // interleaving is not needed for stability because keys are disjoint sets
    // in practice, but keep a single deterministic ordering anyway.
    for (const auto& [key, t] : tensors_) {
      write_pod<uint16_t>(out, static_cast<uint16_t>(key.size()));
      out.write(key.data(), static_cast<std::streamsize>(key.size()));
      write_pod<uint8_t>(out, 0);
      write_pod<uint8_t>(out, static_cast<uint8_t>(t.ndim()));
      for (int d = 0; d < t.ndim(); ++d) write_pod<int32_t>(out, t.dim(d));
      out.write(reinterpret_cast<const char*>(t.data()),
                static_cast<std::streamsize>(t.size() * sizeof(double)));
    }
    for (const auto& [key, b] : blobs_) {
      write_pod<uint16_t>(out, static_cast<uint16_t>(key.size()));
      out.write(key.data(), static_cast<std::streamsize>(key.size()));
      write_pod<uint8_t>(out, 1);
      write_pod<uint64_t>(out, b.size());
      out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    }
    if (!out) throw IoError("archive: write failed " + tmp.string());
  }
  fs::rename(tmp, file);
}

Archive Archive::load(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("archive: cannot read " + file.string());
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, kMagic, 6) != 0) {
    throw IoError("archive: bad magic in " + file.string());
  }
  Archive a;
  uint32_t count = read_pod<uint32_t>(in);
  for (uint32_t i = 0; i < count; ++i) {
    uint16_t name_len = read_pod<uint16_t>(in);
    std::string key(name_len, '\0');
    in.read(key.data(), name_len);
    uint8_t kind = read_pod<uint8_t>(in);
    if (kind == 0) {
      uint8_t ndim = read_pod<uint8_t>(in);
      std::vector<int> shape(ndim);
      for (auto& d : shape) d = read_pod<int32_t>(in);
      Tensor t(shape);
      in.read(reinterpret_cast<char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
      if (!in) throw IoError("archive: truncated tensor " + key);
      a.tensors_[key] = std::move(t);
    } else if (kind == 1) {
      uint64_t len = read_pod<uint64_t>(in);
      std::vector<uint8_t> b(len);
      in.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(len));
      if (!in) throw IoError("archive: truncated blob " + key);
      a.blobs_[key] = std::move(b);
    } else {
      throw IoError("archive: unknown entry kind");
    }
  }
  return a;
}

}  // namespace ivedit::nn
