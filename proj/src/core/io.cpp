// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/core/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ivedit/core/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ivedit::core {

uint8_t quantize_u8(float v) {
  if (!(v > 0.0f)) return 0;
  if (v >= 1.0f) return 255;
  return static_cast<uint8_t>(std::lround(v * 255.0f));
}

float dequantize_u8(uint8_t v) { return static_cast<float>(v) / 255.0f; }

VideoClip snap_to_u8_grid(VideoClip clip) {
  for (float& v : clip.data) v = dequantize_u8(quantize_u8(v));
  return clip;
}

namespace {

std::string frame_name(int i, int channels) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.%s", i, channels == 1 ? "pgm" : "ppm");
  return buf;
}

void write_pnm(const VideoClip& clip, int frame, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  const int pixels = clip.h * clip.w;
  out << (clip.c == 1 ? "P5" : "P6") << "\n" << clip.w << " " << clip.h << "\n255\n";
  std::vector<uint8_t> buf(static_cast<size_t>(pixels) * clip.c);
  const float* src = clip.data.data() + static_cast<size_t>(frame) * pixels * clip.c;
  for (size_t i = 0; i < buf.size(); ++i) buf[i] = quantize_u8(src[i]);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void read_pnm(VideoClip& clip, int frame, const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read " + file.string());
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if ((magic != "P5" && magic != "P6") || maxval != 255) {
    throw IoError("unsupported image format in " + file.string());
  }
  in.get();  // single whitespace after header
  int channels = magic == "P5" ? 1 : 3;
  if (w != clip.w || h != clip.h || channels != clip.c) {
    throw IoError("frame geometry mismatch in " + file.string());
  }
  std::vector<uint8_t> buf(static_cast<size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw IoError("truncated frame " + file.string());
  }
  float* dst = clip.data.data() + static_cast<size_t>(frame) * w * h * channels;
  for (size_t i = 0; i < buf.size(); ++i) dst[i] = dequantize_u8(buf[i]);
}

json clip_meta(const VideoClip& clip) {
  return json{{"id", clip.id},       {"fps", clip.fps}, {"frames", clip.t},
              {"height", clip.h},    {"width", clip.w}, {"channels", clip.c}};
}

}  // namespace

void save_clip(const VideoClip& clip, const fs::path& dir) {
  fs::create_directories(dir);
  write_text_file(dir / "meta.json", clip_meta(clip).dump(2) + "\n");
  for (int f = 0; f < clip.t; ++f) write_pnm(clip, f, dir / frame_name(f, clip.c));
}

VideoClip load_clip(const fs::path& dir) {
  json meta = json::parse(read_text_file(dir / "meta.json"));
  VideoClip clip(meta.at("frames").get<int>(), meta.at("height").get<int>(),
                 meta.at("width").get<int>(), meta.at("channels").get<int>(),
                 meta.at("fps").get<float>(), meta.at("id").get<std::string>());
  for (int f = 0; f < clip.t; ++f) read_pnm(clip, f, dir / frame_name(f, clip.c));
  return clip;
}

std::vector<uint8_t> serialize_clip(const VideoClip& clip) {
  std::string meta = clip_meta(clip).dump();
  std::vector<uint8_t> out(8 + 4 + meta.size() + clip.data.size());
  std::memcpy(out.data(), "IVCLIP1\n", 8);
  uint32_t meta_len = static_cast<uint32_t>(meta.size());
  std::memcpy(out.data() + 8, &meta_len, 4);
  std::memcpy(out.data() + 12, meta.data(), meta.size());
  uint8_t* pixels = out.data() + 12 + meta.size();
  for (size_t i = 0; i < clip.data.size(); ++i) pixels[i] = quantize_u8(clip.data[i]);
  return out;
}

std::vector<uint8_t> serialize_mask_video(const MaskVideo& m) {
  size_t bits = m.data.size();
  std::vector<uint8_t> out(20 + (bits + 7) / 8, 0);
  std::memcpy(out.data(), "IVMASK1\n", 8);
  int32_t dims[3] = {m.t, m.h, m.w};
  std::memcpy(out.data() + 8, dims, 12);
  uint8_t* packed = out.data() + 20;
  for (size_t i = 0; i < bits; ++i) {
    if (m.data[i]) packed[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  }
  return out;
}

MaskVideo deserialize_mask_video(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 20 || std::memcmp(bytes.data(), "IVMASK1\n", 8) != 0) {
    throw IoError("bad mask video blob");
  }
  int32_t dims[3];
  std::memcpy(dims, bytes.data() + 8, 12);
  MaskVideo m(dims[0], dims[1], dims[2]);
  size_t bits = m.data.size();
  if (bytes.size() != 20 + (bits + 7) / 8) throw IoError("mask video blob size mismatch");
  const uint8_t* packed = bytes.data() + 20;
  for (size_t i = 0; i < bits; ++i) {
    m.data[i] = (packed[i / 8] >> (i % 8)) & 1u;
  }
  return m;
}

namespace {

json pair_to_json(const ManifestPair& p) {
  json j{{"id", p.id},
         {"category", std::string(category_name(p.category))},
         {"instruction", p.instruction},
         {"source", p.source_path},
         {"target", p.target_path},
         {"frames", p.frames}};
  if (p.backward_instruction) {
    j["backward_instruction"] = *p.backward_instruction;
  }
  return j;
}

ManifestPair pair_from_json(const json& j) {
  ManifestPair p;
  p.id = j.at("id").get<std::string>();
  auto cat = parse_category(j.at("category").get<std::string>());
  if (!cat) throw DataError("unknown category in manifest: " + j.at("category").dump());
  p.category = *cat;
  p.instruction = j.at("instruction").get<std::string>();
  if (j.contains("backward_instruction") && !j.at("backward_instruction").is_null()) {
    p.backward_instruction = j.at("backward_instruction").get<std::string>();
  }
  p.source_path = j.at("source").get<std::string>();
  p.target_path = j.at("target").get<std::string>();
  p.frames = j.value("frames", 0);
  return p;
}

}  // namespace

void save_pair_manifest(const std::vector<ManifestPair>& pairs, const fs::path& file) {
  std::ostringstream out;
  for (const auto& p : pairs) out << pair_to_json(p).dump() << "\n";
  write_text_file_atomic(file, out.str());
}

std::vector<ManifestPair> load_pair_manifest(const fs::path& file) {
  std::vector<ManifestPair> pairs;
  std::string text = read_text_file(file);
  size_t line_no = 0;
  for (std::string_view sv = text; !sv.empty();) {
    size_t eol = sv.find('\n');
    std::string_view line = sv.substr(0, eol);
    sv = eol == std::string_view::npos ? std::string_view{} : sv.substr(eol + 1);
    ++line_no;
    if (line.empty()) continue;
    try {
      pairs.push_back(pair_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw DataError("manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

EditPair load_edit_pair(const ManifestPair& entry, const fs::path& manifest_dir) {
  EditPair pair;
  pair.id = entry.id;
  pair.category = entry.category;
  pair.instruction = entry.instruction;
  pair.backward_instruction = entry.backward_instruction;
  pair.source = load_clip(manifest_dir / entry.source_path);
  pair.target = load_clip(manifest_dir / entry.target_path);
  return pair;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

void write_text_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_text_file(tmp, content);
  fs::rename(tmp, path);
}

}  // namespace ivedit::core
