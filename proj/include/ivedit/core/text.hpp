// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ivedit::core {

// Number of maximal whitespace-separated tokens.
int word_count(std::string_view text);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);

}  // namespace ivedit::core
