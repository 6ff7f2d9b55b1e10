/*
 * (C) Copyright 2026 mixnorm developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace mixnorm {

/// Failure categories. The numeric values are mirrored by the C API
/// (`mixnorm_status`), so do not reorder.
enum class ErrorCode : int {
  InvalidArgument = 1,
  InvalidSection = 2,
  SizeLimit = 3,
  Degenerate = 4,
  BadMagic = 5,
  BadVersion = 6,
  Truncated = 7,
  NonFinite = 8,
  UnsupportedFormat = 9,
  Io = 10,
  Config = 11,
  Internal = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mixnorm
