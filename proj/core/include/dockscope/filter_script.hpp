// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dockscope/filter.hpp"

namespace dockscope {

// Filter scripts hold one statement per line; '#' starts a comment.
//
//   [disabled] <kind> cc  <id>...
//   [disabled] <kind> ppe <protein> <protein> [<protein> <protein>]...
//   [disabled] <kind> ppc <cc> <protein> <protein> [<cc> <protein> <protein>]...
//   [disabled] <kind> aap <aa> <aa> [<aa> <aa>]...
//   [disabled] <kind> aa  <aa>...
//   [disabled] <kind> <level> where <property> <min> <max> [of <protein> [<protein>]]
//   [disabled] range <level> <property> <min> <max> [of <protein> [<protein>]]
//
// <kind> is remove, remove_complement, fix or add; bounds accept -inf and inf.

struct FilterStatement {
  int line = 0;
  FilterKind kind = FilterKind::remove;
  SubjectSpec subject;
  bool enabled = true;
};

/// Throws Error(script) naming the offending line.
std::vector<FilterStatement> parse_filter_script(std::string_view text, const ComplexEnsemble& ens);

/// Resolves and appends the statements in order; returns the new filter ids.
std::vector<int> apply_filter_script(FilterQueue& queue, const ResolveContext& ctx,
                                     const std::vector<FilterStatement>& statements);

/// Inverse of parse_filter_script for one record.
std::string format_statement(FilterKind kind, const SubjectSpec& subject, bool enabled, const ComplexEnsemble& ens);

/// Whole queue as a script, in evaluation order.
std::string format_filter_script(const FilterQueue& queue, const ComplexEnsemble& ens);

}  // namespace dockscope
