// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dockscope/hierarchy.hpp"

namespace dockscope {

/// Contact interfaces of one configuration (from the ensemble or an external
/// reference), keyed by protein pair. Keys are sorted.
struct ContactProfile {
  std::string id;
  std::vector<bool> covers;  // per ensemble protein: present in this configuration
  std::map<ProteinPair, std::vector<AapKey>> interfaces;
};

ContactProfile profile_of_cc(const ComplexEnsemble& ens, CcIndex cc);
/// Runs contact detection on the reference with the ensemble's cutoff.
ContactProfile profile_of_reference(const ComplexEnsemble& ens, const ReferenceConfiguration& ref);

/// |A ∩ B| / |A ∪ B| over sorted key sets; two empty sets score 1.
double jaccard(std::span<const AapKey> a, std::span<const AapKey> b);

/// Interface overlap of two PPCs of the same protein pair.
double ppc_similarity(const ComplexEnsemble& ens, PpcIndex a, PpcIndex b);

/// Mean PPC similarity over protein pairs that have a PPC in either side; a
/// pair missing on one side contributes 0. Pairs involving a protein that
/// either side does not cover are skipped. Absent when no pair is comparable.
std::optional<double> cc_similarity(const ContactProfile& a, const ContactProfile& b);

struct ScoredItem {
  std::uint32_t index = 0;  // CC or PPC index; ties are broken by it
  std::optional<double> score;
};

/// Descending score, ties by ascending index; absent scores go last.
std::vector<ScoredItem> rank_by_similarity(std::vector<ScoredItem> items);

/// Similarity of every configuration to `reference` ("similarity_to_primary").
std::vector<std::optional<double>> similarity_column(const ComplexEnsemble& ens, const ContactProfile& reference);

/// One PPC of a side-by-side contact comparison. Flags mark elements shared
/// with the reference PPC; `missing` lists reference residues absent here.
struct ContactListEntry {
  PpcIndex ppc = 0;
  std::optional<double> similarity;  // to the reference
  std::vector<AapIndex> aaps;        // ascending
  std::vector<bool> aap_shared;
  std::array<std::vector<std::uint32_t>, 2> residues;  // per side of the pair, ascending
  std::array<std::vector<bool>, 2> residue_shared;
  std::array<std::vector<std::uint32_t>, 2> missing;
};

struct ContactListModel {
  ProteinPair pair;
  std::optional<PpcIndex> reference;
  std::vector<ContactListEntry> entries;  // by similarity to the reference, else as given
};

/// All PPCs must belong to `pair`; so must the reference.
ContactListModel contact_list_model(const ComplexEnsemble& ens, ProteinPair pair, std::span<const PpcIndex> ppcs,
                                    std::optional<PpcIndex> reference);

inline constexpr const char* kSimilarityColumn = "similarity_to_primary";

}  // namespace dockscope
