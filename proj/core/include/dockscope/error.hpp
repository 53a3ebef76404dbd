// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dockscope {

enum class ErrorCode {
  parse,
  empty_structure,
  inconsistency,
  integrity,
  invalid_argument,
  not_found,
  degenerate_geometry,
  script,
  io,
  internal,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code and optional detail text.
/// The server maps it to {code, message, detail}; the CLI maps it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              std::string detail = {}) {
  throw Error(code, message, std::move(detail));
}

}  // namespace dockscope
