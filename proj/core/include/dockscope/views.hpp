// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dockscope/hierarchy.hpp"

namespace dockscope {

/// Interface-size and consistency aggregate of one protein pair ensemble,
/// computed over the visible configurations only.
struct PpeAggregate {
  PpeIndex ppe = 0;
  std::size_t n_ppcs = 0;        // visible PPCs
  std::size_t n_unique_aap = 0;  // keys present in at least one visible PPC
  /// Fraction of visible PPCs containing each present key, ascending by key.
  std::vector<std::pair<AapIndex, double>> presence;
  /// Mean presence; absent when no PPC is visible.
  std::optional<double> consistency;
};

PpeAggregate ppe_aggregate(const ComplexEnsemble& ens, PpeIndex ppe, const CcSet& visible);

enum class BarScaling { independent, absolute };

struct OverviewBar {
  ProteinIndex partner = 0;
  PpeIndex ppe = 0;
  std::size_t interface_size = 0;      // N_AAP over visible PPCs
  std::size_t total_interface_size = 0;  // N_AAP over all PPCs
  double height = 0;                   // normalized to [0, 1]
  std::optional<double> consistency;   // reference value is 1
};

struct OverviewNode {
  ProteinIndex protein = 0;
  std::vector<OverviewBar> bars;  // one per partner with a PPE, by partner index
};

struct OverviewEdge {
  PpeIndex ppe = 0;
  ProteinPair pair;
  std::size_t visible_weight = 0;  // visible CCs where the pair is in contact
  std::size_t total_weight = 0;    // all CCs where the pair is in contact
};

struct OverviewModel {
  BarScaling scaling = BarScaling::independent;
  std::vector<OverviewNode> nodes;
  std::vector<OverviewEdge> edges;
};

OverviewModel overview_model(const ComplexEnsemble& ens, const CcSet& visible, BarScaling scaling);

/// Per-residue interaction counts of the primary protein. Each AAP counts
/// once per visible configuration containing it.
struct ProteinViewModel {
  struct PartnerRow {
    ProteinIndex partner = 0;
    std::vector<std::size_t> counts;  // indexed by primary residue
  };
  /// Displayed column: a residue, or a collapsed run of non-interacting residues.
  struct Column {
    bool gap = false;
    std::uint32_t residue = 0;  // first residue of the column
    std::uint32_t length = 1;   // residues covered
  };

  ProteinIndex primary = 0;
  bool condensed = false;
  std::vector<std::size_t> totals;  // indexed by primary residue
  std::vector<PartnerRow> partners;
  std::vector<Column> columns;
  std::vector<std::uint32_t> ruler;  // displayed residues whose sequence number is a multiple of 10
};

/// Maximal non-interacting runs strictly longer than this are collapsed.
inline constexpr std::uint32_t kCondensedRunLimit = 25;

ProteinViewModel protein_view_model(const ComplexEnsemble& ens, ProteinIndex primary,
                                    const CcSet& visible, bool condensed);

enum class AxisSort { sequence, frequency, hydrophobicity, charge };

struct MatrixAxis {
  ProteinIndex protein = 0;
  std::vector<std::uint32_t> residues;  // display order
  std::vector<std::size_t> frequency;   // per displayed residue: sum of its cells
};

struct MatrixCell {
  AapIndex aap = 0;
  std::uint32_t row = 0;  // position in rows.residues
  std::uint32_t col = 0;  // position in cols.residues
  std::size_t count = 0;  // visible PPCs containing the key
};

struct ResidueMatrixModel {
  PpeIndex ppe = 0;
  AxisSort sort = AxisSort::sequence;
  MatrixAxis rows;  // pair.first
  MatrixAxis cols;  // pair.second
  std::vector<MatrixCell> cells;  // nonzero cells, by (row, col)
};

ResidueMatrixModel residue_matrix_model(const ComplexEnsemble& ens, ProteinPair pair,
                                        const CcSet& visible, AxisSort sort);

}  // namespace dockscope
