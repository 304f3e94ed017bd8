// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/pipeline/builders.hpp"

#include "ivedit/core/errors.hpp"

namespace ivedit::pipeline {

using core::Category;
using core::EditPair;
using core::ParameterError;
using core::VideoClip;

EditPair build_local_add_pair(const VideoClip& original, const VideoClip& inpainted,
                              const std::string& obj_caption, const std::string& instruction) {
  if (!original.same_geometry(inpainted)) {
    throw ParameterError("build_local_add_pair: geometry mismatch");
  }
  EditPair p;
  p.source = inpainted;
  p.target = original;
  p.category = Category::LocalAdd;
  p.instruction =
      instruction.empty() ? "Add " + obj_caption + " to the scene, matching the existing "
                            "lighting and motion of the video."
                          : instruction;
  p.backward_instruction = "Remove " + obj_caption + " from the video.";
  p.id = original.id + "/local_add";
  return p;
}

EditPair build_local_remove_pair(const VideoClip& original,
                                 const VideoClip& synthesized_with_object,
                                 const std::string& obj_caption,
                                 const std::string& instruction) {
  if (!original.same_geometry(synthesized_with_object)) {
    throw ParameterError("build_local_remove_pair: geometry mismatch");
  }
  EditPair p;
  p.source = synthesized_with_object;
  p.target = original;
  p.category = Category::LocalRemove;
  p.instruction = instruction.empty()
                      ? "Remove " + obj_caption + " from the video and restore the background "
                        "behind it."
                      : instruction;
  p.backward_instruction = "Add " + obj_caption + " back to the video.";
  p.id = original.id + "/local_remove";
  return p;
}

std::vector<EditPair> build_camera_pairs(const LabeledShots& shots, const VideoClip& video) {
  struct Labeled {
    ShotType type;
    const ShotSegment* seg;
  };
  const Labeled all[3] = {{ShotType::Close, &shots.close},
                          {ShotType::Medium, &shots.medium},
                          {ShotType::Wide, &shots.wide}};
  for (const auto& l : all) {
    if (l.seg->end <= l.seg->start || l.seg->start < 0 || l.seg->end > video.t) {
      throw ParameterError("build_camera_pairs: missing or invalid " +
                           std::string(shot_type_name(l.type)) + " shot");
    }
  }
  std::vector<EditPair> out;
  for (const auto& a : all) {
    for (const auto& b : all) {
      if (a.type == b.type) continue;
      EditPair p;
      p.source = extract_window(video, {a.seg->start, a.seg->end - a.seg->start});
      p.target = extract_window(video, {b.seg->start, b.seg->end - b.seg->start});
      p.category = Category::CameraMultiShot;
      p.instruction = "Change the video to a " + std::string(shot_type_name(b.type)) +
                      " shot of the same subject.";
      p.backward_instruction = "Change the video to a " + std::string(shot_type_name(a.type)) +
                               " shot of the same subject.";
      p.id = video.id + "/camera/" + std::string(shot_type_name(a.type)) + "-" +
             std::string(shot_type_name(b.type));
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<EditPair> build_creative_pairs(
    const std::vector<VideoClip>& videos,
    const std::function<std::string(int, int)>& instruction_for) {
  int n = static_cast<int>(videos.size());
  if (n < 2) throw ParameterError("build_creative_pairs: need at least two videos");
  std::vector<EditPair> out;
  out.reserve(static_cast<size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      EditPair p;
      p.source = videos[static_cast<size_t>(i)];
      p.target = videos[static_cast<size_t>(j)];
      p.category = Category::CreativeEdit;
      p.instruction = instruction_for(i, j);
      p.id = videos[static_cast<size_t>(i)].id + "/creative/" + std::to_string(i) + "-" +
             std::to_string(j);
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace ivedit::pipeline
