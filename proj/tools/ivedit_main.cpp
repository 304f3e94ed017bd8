// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0

#include "ivedit/cli/cli.hpp"

int main(int argc, char** argv) { return ivedit::cli::run(argc, argv); }
