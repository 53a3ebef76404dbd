// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dockscope/amino_acids.hpp"
#include "dockscope/cc_set.hpp"
#include "dockscope/contacts.hpp"
#include "dockscope/ingest.hpp"

namespace dockscope {

using AapIndex = std::uint32_t;
using PpcIndex = std::uint32_t;
using PpeIndex = std::uint32_t;

inline constexpr double kDefaultContactCutoff = 5.0;

/// Residue of one protein; `residue` indexes ProteinInfo::residues.
struct AminoAcidId {
  ProteinIndex protein = 0;
  std::uint32_t residue = 0;

  friend auto operator<=>(const AminoAcidId&, const AminoAcidId&) = default;
};

/// Ensemble-wide identity of an amino acid pair; first.protein < second.protein.
struct AapKey {
  AminoAcidId first;
  AminoAcidId second;

  ProteinPair pair() const { return ProteinPair{first.protein, second.protein}; }
  friend auto operator<=>(const AapKey&, const AapKey&) = default;
};

struct AapInstance {
  AapIndex aap = 0;
  double min_distance = 0;
};

/// Protein pair configuration: the interface of one pair inside one CC.
struct Ppc {
  CcIndex cc = 0;
  PpeIndex ppe = 0;
  std::vector<AapInstance> contacts;     // sorted by aap index
  std::map<std::string, double> scores;  // pairwise scores, when provided
};

/// Protein pair ensemble: all PPCs of one pair.
struct Ppe {
  ProteinPair pair;
  std::vector<PpcIndex> ppcs;  // ordered by cc
  CcSet ccs;                   // configurations where the pair is in contact
  std::vector<AapIndex> aaps;  // every key seen in this PPE, ascending
};

struct AapRecord {
  AapKey key;
  PpeIndex ppe = 0;
  CcSet ccs;  // configurations containing this pair
};

/// Immutable five-level hierarchy (ensemble, configurations, pair ensembles,
/// pair configurations, amino acid pairs) over a loaded raw ensemble.
class ComplexEnsemble {
 public:
  const std::vector<ProteinInfo>& proteins() const { return raw_.proteins; }
  const std::vector<Configuration>& configurations() const { return raw_.configurations; }
  const std::vector<std::string>& property_names() const { return raw_.property_names; }
  const std::vector<std::string>& warnings() const { return raw_.warnings; }
  std::size_t cc_count() const { return raw_.configurations.size(); }
  double cutoff() const { return cutoff_; }

  const std::vector<Ppe>& ppes() const { return ppes_; }
  const std::vector<Ppc>& ppcs() const { return ppcs_; }
  const std::vector<AapRecord>& aaps() const { return aaps_; }

  std::optional<ProteinIndex> find_protein(std::string_view name) const;
  std::optional<CcIndex> find_cc(std::string_view id) const;
  std::optional<PpeIndex> find_ppe(ProteinPair pair) const;
  std::optional<AapIndex> find_aap(const AapKey& key) const;
  std::optional<PpcIndex> find_ppc(CcIndex cc, ProteinPair pair) const;
  std::optional<std::size_t> find_property(std::string_view name) const;

  std::span<const PpcIndex> ppcs_of_cc(CcIndex cc) const { return cc_ppcs_[cc]; }
  /// AAPs with `aa` on either side, ascending.
  std::span<const AapIndex> aaps_of_aa(AminoAcidId aa) const {
    return aa_aaps_[aa.protein][aa.residue];
  }
  /// All AAP keys of one configuration (reverse index), ascending.
  std::vector<AapIndex> aaps_of_cc(CcIndex cc) const;
  /// Configurations in which `aa` is part of at least one contact.
  CcSet ccs_with_aa(AminoAcidId aa) const;

  const Residue& residue(AminoAcidId aa) const { return raw_.proteins[aa.protein].residues[aa.residue]; }
  double hydrophobicity(AminoAcidId aa) const;
  Charge charge(AminoAcidId aa) const;

  CcSet all_ccs() const { return full_cc_set(cc_count()); }

 private:
  friend ComplexEnsemble assemble_hierarchy(RawEnsemble, std::vector<std::vector<PairContacts>>, double);

  RawEnsemble raw_;
  double cutoff_ = kDefaultContactCutoff;
  std::vector<Ppe> ppes_;
  std::vector<Ppc> ppcs_;
  std::vector<AapRecord> aaps_;
  std::vector<std::vector<PpcIndex>> cc_ppcs_;
  std::vector<std::vector<std::vector<AapIndex>>> aa_aaps_;  // [protein][residue]
  std::map<std::string, CcIndex, std::less<>> cc_by_id_;
};

struct HierarchyOptions {
  double cutoff = kDefaultContactCutoff;
};

/// Detects contacts in every configuration (in parallel) and materializes the
/// hierarchy. Property columns named `pair:<A>:<B>:<score>` become pairwise
/// PPC scores instead of configuration properties.
ComplexEnsemble build_hierarchy(RawEnsemble raw, const HierarchyOptions& options = {});

/// Builds the hierarchy from precomputed per-configuration contacts
/// (`contacts[cc]`), skipping geometry.
ComplexEnsemble assemble_hierarchy(RawEnsemble raw, std::vector<std::vector<PairContacts>> contacts,
                                   double cutoff);

}  // namespace dockscope
