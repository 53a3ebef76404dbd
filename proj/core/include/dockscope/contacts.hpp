// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "dockscope/ingest.hpp"

namespace dockscope {

using ProteinIndex = std::uint16_t;

/// Unordered protein pair stored with first < second.
struct ProteinPair {
  ProteinIndex first = 0;
  ProteinIndex second = 0;

  static ProteinPair of(ProteinIndex a, ProteinIndex b) {
    return a < b ? ProteinPair{a, b} : ProteinPair{b, a};
  }
  bool contains(ProteinIndex p) const { return first == p || second == p; }
  ProteinIndex other(ProteinIndex p) const { return p == first ? second : first; }

  friend auto operator<=>(const ProteinPair&, const ProteinPair&) = default;
};

struct ResidueContact {
  std::uint32_t residue_first = 0;   // residue of pair.first
  std::uint32_t residue_second = 0;  // residue of pair.second
  double min_distance = 0;           // Angstrom
};

/// Contact interface of one protein pair within one configuration.
struct PairContacts {
  ProteinPair pair;
  std::vector<ResidueContact> contacts;  // sorted by (residue_first, residue_second)
};

/// Residue pairs from different proteins whose minimum atom-atom distance is
/// at most `cutoff`. One entry per protein pair with at least one contact,
/// ordered by pair. Absent proteins are passed as nullptr.
std::vector<PairContacts> detect_contacts(std::span<const ProteinCoords* const> proteins, double cutoff);

std::vector<PairContacts> detect_contacts(const Configuration& cc, double cutoff);
std::vector<PairContacts> detect_contacts(const ReferenceConfiguration& ref, double cutoff);

}  // namespace dockscope
