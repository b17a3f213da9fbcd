// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace lpcore {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDegenerateQuad,
  kAngleOutOfRange,
  kDomainError,
  kShapeMismatch,
  kInfeasibleTarget,
  kImageIdMismatch,
  kParseError,
  kIoError,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Exception carrying a typed error code. Every failure raised by the core
/// library is an Error; the C API maps the code onto lpcore_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures remember the 1-based line they occurred on (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParseError,
              line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  /// Same error with `context` (typically a file name) prefixed.
  ParseError(const std::string& context, const ParseError& inner)
      : Error(ErrorCode::kParseError, context + ": " + inner.what()), line_(inner.line_) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lpcore
