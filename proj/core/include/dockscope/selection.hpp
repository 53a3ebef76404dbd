// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dockscope/filter.hpp"

namespace dockscope {

/// Selected items per hierarchy level; vectors are sorted and unique.
struct LevelItems {
  CcSet ccs;
  std::vector<PpeIndex> ppes;
  std::vector<PpcIndex> ppcs;
  std::vector<AapIndex> aaps;
  std::vector<AminoAcidId> aas;

  bool empty() const {
    return ccs.none() && ppes.empty() && ppcs.empty() && aaps.empty() && aas.empty();
  }
  friend bool operator==(const LevelItems&, const LevelItems&) = default;
};

/// Current focus. `anchor` keeps what the user explicitly selected, so that
/// propagation always starts from it and repeated propagation is stable.
struct Selection {
  LevelItems items;
  Level anchor_level = Level::cc;
  LevelItems anchor;

  std::optional<ProteinIndex> primary_protein;
  std::optional<ProteinPair> primary_ppe;
  std::optional<CcIndex> primary_cc;

  friend bool operator==(const Selection&, const Selection&) = default;
};

Selection empty_selection(const ComplexEnsemble& ens);

/// Replaces the selection on one level (validating ids); other levels stay
/// untouched until propagation is requested.
void select_ccs(const ComplexEnsemble& ens, Selection& sel, std::vector<CcIndex> ccs);
void select_ppes(const ComplexEnsemble& ens, Selection& sel, std::vector<ProteinPair> pairs);
void select_ppcs(const ComplexEnsemble& ens, Selection& sel, std::vector<PpcIndex> ppcs);
void select_aaps(const ComplexEnsemble& ens, Selection& sel, std::vector<AapKey> keys);
void select_aas(const ComplexEnsemble& ens, Selection& sel, std::vector<AminoAcidId> aas);

/// Protein View cells are (primary residue, partner protein); selecting them
/// highlights the matching AAPs and AAs among the visible configurations.
void select_protein_view_cells(const ComplexEnsemble& ens, Selection& sel, ProteinIndex primary,
                               const std::vector<std::pair<std::uint32_t, ProteinIndex>>& cells,
                               const CcSet& visible);

enum class Propagation { up, down, up_then_down };

/// up: CC selection := configurations containing the anchored items.
/// down: PPEs, PPCs, AAPs and AAs := everything inside the selected CCs.
void propagate_selection(const ComplexEnsemble& ens, Selection& sel, Propagation direction);

void set_primary_protein(const ComplexEnsemble& ens, Selection& sel, ProteinIndex p);
void set_primary_ppe(const ComplexEnsemble& ens, Selection& sel, ProteinPair pair);

}  // namespace dockscope
