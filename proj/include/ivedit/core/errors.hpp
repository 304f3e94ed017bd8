// Copyright (c) 2026 ivedit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy shared by all modules.

#pragma once

#include <stdexcept>
#include <string>

namespace ivedit::core {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed inconsistent shapes, out-of-range knobs, bad config.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data violates a contract (non-finite values, missing records).
class DataError : public Error {
 public:
  using Error::Error;
};

// Text did not match an expected grammar.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A parsed value fell outside its legal range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Remote/adapter call failed after retries.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Rendered content does not fit the target geometry.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Missing or malformed configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failures (unreadable store, bad archive).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ivedit::core
