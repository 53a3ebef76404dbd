// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace dockscope {

/// Index of a complex configuration inside an ensemble (position in id order).
using CcIndex = std::uint32_t;

/// Set of configurations as a bitset over [0, n_ccs).
using CcSet = boost::dynamic_bitset<std::uint64_t>;

inline CcSet full_cc_set(std::size_t n) {
  CcSet s(n);
  s.set();
  return s;
}

inline std::vector<CcIndex> to_indices(const CcSet& s) {
  std::vector<CcIndex> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != CcSet::npos; i = s.find_next(i))
    out.push_back(static_cast<CcIndex>(i));
  return out;
}

template <typename Range>
CcSet make_cc_set(std::size_t n, const Range& indices) {
  CcSet s(n);
  for (auto i : indices) s.set(static_cast<std::size_t>(i));
  return s;
}

}  // namespace dockscope
