// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/error.hpp"

namespace dockscope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::empty_structure: return "empty_structure";
    case ErrorCode::inconsistency: return "inconsistency";
    case ErrorCode::integrity: return "integrity_error";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::degenerate_geometry: return "degenerate_geometry";
    case ErrorCode::script: return "script_error";
    case ErrorCode::io: return "io_error";
    case ErrorCode::internal: return "internal_error";
  }
  return "internal_error";
}

}  // namespace dockscope
