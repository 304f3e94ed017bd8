// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Pair constructors for the add/remove symmetry, camera transitions, and
// creative pairings.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ivedit/core/types.hpp"
#include "ivedit/pipeline/ops.hpp"

namespace ivedit::pipeline {

// source = inpainted clip (object absent), target = the untouched original.
core::EditPair build_local_add_pair(const core::VideoClip& original,
                                    const core::VideoClip& inpainted,
                                    const std::string& obj_caption,
                                    const std::string& instruction = {});

// source = synthesized clip with the pasted object, target = the original.
core::EditPair build_local_remove_pair(const core::VideoClip& original,
                                       const core::VideoClip& synthesized_with_object,
                                       const std::string& obj_caption,
                                       const std::string& instruction = {});

struct LabeledShots {
  ShotSegment close;
  ShotSegment medium;
  ShotSegment wide;
};

// All six ordered transitions between the three labeled shots.
std::vector<core::EditPair> build_camera_pairs(const LabeledShots& shots,
                                               const core::VideoClip& video);

// All n(n-1) ordered pairs of clips sharing a source frame. The provider
// yields the instruction for pair (i, j); mock mode uses templates.
std::vector<core::EditPair> build_creative_pairs(
    const std::vector<core::VideoClip>& videos,
    const std::function<std::string(int, int)>& instruction_for);

}  // namespace ivedit::pipeline
