// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ivedit/core/types.hpp"

namespace ivedit::core {

// One broken invariant. Violations are data, not faults.
struct Violation {
  std::string field;
  std::string rule;
  std::string message;
};

// Structural validation of a clip against the VideoClip invariants.
std::vector<Violation> validate_clip(const VideoClip& clip, const std::string& field_prefix);

// Total function: never throws, empty result iff every invariant holds.
std::vector<Violation> validate_pair(const EditPair& pair);

}  // namespace ivedit::core
