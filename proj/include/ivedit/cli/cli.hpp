// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Single entry point: pipeline, train, bench, and stats subcommands.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#pragma once

#include <string>
#include <vector>

namespace ivedit::cli {

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace ivedit::cli
