// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/views.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "dockscope/error.hpp"

namespace dockscope {

PpeAggregate ppe_aggregate(const ComplexEnsemble& ens, PpeIndex ppe, const CcSet& visible) {
  const Ppe& e = ens.ppes().at(ppe);
  PpeAggregate agg;
  agg.ppe = ppe;
  agg.n_ppcs = (e.ccs & visible).count();
  if (agg.n_ppcs == 0) return agg;
  double sum = 0;
  for (AapIndex a : e.aaps) {
    std::size_t present = (ens.aaps()[a].ccs & visible).count();
    if (present == 0) continue;
    double p = static_cast<double>(present) / static_cast<double>(agg.n_ppcs);
    agg.presence.emplace_back(a, p);
    sum += p;
  }
  agg.n_unique_aap = agg.presence.size();
  agg.consistency = sum / static_cast<double>(agg.n_unique_aap);
  return agg;
}

OverviewModel overview_model(const ComplexEnsemble& ens, const CcSet& visible, BarScaling scaling) {
  OverviewModel model;
  model.scaling = scaling;
  model.nodes.resize(ens.proteins().size());
  for (std::size_t p = 0; p < model.nodes.size(); ++p) model.nodes[p].protein = static_cast<ProteinIndex>(p);

  for (PpeIndex i = 0; i < ens.ppes().size(); ++i) {
    const Ppe& e = ens.ppes()[i];
    model.edges.push_back(OverviewEdge{i, e.pair, (e.ccs & visible).count(), e.ccs.count()});
    PpeAggregate agg = ppe_aggregate(ens, i, visible);
    OverviewBar bar;
    bar.ppe = i;
    bar.interface_size = agg.n_unique_aap;
    bar.total_interface_size = e.aaps.size();
    bar.consistency = agg.consistency;
    bar.partner = e.pair.second;
    model.nodes[e.pair.first].bars.push_back(bar);
    bar.partner = e.pair.first;
    model.nodes[e.pair.second].bars.push_back(bar);
  }

  std::size_t global_max = 0;
  for (auto& node : model.nodes) {
    std::sort(node.bars.begin(), node.bars.end(),
              [](const auto& a, const auto& b) { return a.partner < b.partner; });
    for (const auto& b : node.bars) global_max = std::max(global_max, b.interface_size);
  }
  for (auto& node : model.nodes) {
    std::size_t denom = global_max;
    if (scaling == BarScaling::independent) {
      denom = 0;
      for (const auto& b : node.bars) denom = std::max(denom, b.interface_size);
    }
    for (auto& b : node.bars)
      b.height = denom == 0 ? 0.0 : static_cast<double>(b.interface_size) / static_cast<double>(denom);
  }
  return model;
}

ProteinViewModel protein_view_model(const ComplexEnsemble& ens, ProteinIndex primary,
                                    const CcSet& visible, bool condensed) {
  if (primary >= ens.proteins().size()) fail(ErrorCode::not_found, "unknown protein");
  const std::size_t n_res = ens.proteins()[primary].residues.size();
  ProteinViewModel model;
  model.primary = primary;
  model.condensed = condensed;
  model.totals.assign(n_res, 0);

  for (const Ppe& e : ens.ppes()) {
    if (!e.pair.contains(primary)) continue;
    ProteinViewModel::PartnerRow row;
    row.partner = e.pair.other(primary);
    row.counts.assign(n_res, 0);
    const bool primary_first = e.pair.first == primary;
    for (AapIndex a : e.aaps) {
      const AapRecord& rec = ens.aaps()[a];
      std::size_t c = (rec.ccs & visible).count();
      if (c == 0) continue;
      std::uint32_t r = primary_first ? rec.key.first.residue : rec.key.second.residue;
      row.counts[r] += c;
      model.totals[r] += c;
    }
    model.partners.push_back(std::move(row));
  }
  std::sort(model.partners.begin(), model.partners.end(),
            [](const auto& a, const auto& b) { return a.partner < b.partner; });

  std::uint32_t r = 0;
  while (r < n_res) {
    if (condensed && model.totals[r] == 0) {
      std::uint32_t end = r;
      while (end < n_res && model.totals[end] == 0) ++end;
      if (end - r > kCondensedRunLimit) {
        model.columns.push_back({true, r, end - r});
        r = end;
        continue;
      }
      for (; r < end; ++r) model.columns.push_back({false, r, 1});
      continue;
    }
    model.columns.push_back({false, r, 1});
    ++r;
  }
  const auto& residues = ens.proteins()[primary].residues;
  for (const auto& col : model.columns)
    if (!col.gap && residues[col.residue].seq % 10 == 0) model.ruler.push_back(col.residue);
  return model;
}

namespace {

// Display rank for charge sorting: positive, then neutral, then negative.
int charge_rank(Charge c) {
  switch (c) {
    case Charge::positive: return 0;
    case Charge::neutral: return 1;
    case Charge::negative: return 2;
  }
  return 1;
}

void order_axis(const ComplexEnsemble& ens, MatrixAxis& axis, AxisSort sort) {
  std::vector<std::size_t> idx(axis.residues.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto& residues = ens.proteins()[axis.protein].residues;
  auto seq_less = [&](std::size_t a, std::size_t b) {
    const Residue& x = residues[axis.residues[a]];
    const Residue& y = residues[axis.residues[b]];
    return std::tie(x.seq, x.icode, axis.residues[a]) < std::tie(y.seq, y.icode, axis.residues[b]);
  };
  auto aa = [&](std::size_t i) { return AminoAcidId{axis.protein, axis.residues[i]}; };
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    switch (sort) {
      case AxisSort::sequence: break;
      case AxisSort::frequency:
        if (axis.frequency[a] != axis.frequency[b]) return axis.frequency[a] > axis.frequency[b];
        break;
      case AxisSort::hydrophobicity: {
        double ha = ens.hydrophobicity(aa(a)), hb = ens.hydrophobicity(aa(b));
        if (ha != hb) return ha > hb;
        break;
      }
      case AxisSort::charge: {
        int ca = charge_rank(ens.charge(aa(a))), cb = charge_rank(ens.charge(aa(b)));
        if (ca != cb) return ca < cb;
        break;
      }
    }
    return seq_less(a, b);
  });
  MatrixAxis sorted;
  sorted.protein = axis.protein;
  for (std::size_t i : idx) {
    sorted.residues.push_back(axis.residues[i]);
    sorted.frequency.push_back(axis.frequency[i]);
  }
  axis = std::move(sorted);
}

}  // namespace

ResidueMatrixModel residue_matrix_model(const ComplexEnsemble& ens, ProteinPair pair,
                                        const CcSet& visible, AxisSort sort) {
  auto ppe = ens.find_ppe(pair);
  if (!ppe) fail(ErrorCode::not_found, "no protein pair ensemble for the requested pair");
  ResidueMatrixModel model;
  model.ppe = *ppe;
  model.sort = sort;
  model.rows.protein = pair.first;
  model.cols.protein = pair.second;

  struct Raw {
    AapIndex aap;
    std::uint32_t r1, r2;
    std::size_t count;
  };
  std::vector<Raw> raw;
  std::map<std::uint32_t, std::size_t> row_freq, col_freq;
  for (AapIndex a : ens.ppes()[*ppe].aaps) {
    const AapRecord& rec = ens.aaps()[a];
    std::size_t c = (rec.ccs & visible).count();
    if (c == 0) continue;
    raw.push_back({a, rec.key.first.residue, rec.key.second.residue, c});
    row_freq[rec.key.first.residue] += c;
    col_freq[rec.key.second.residue] += c;
  }
  for (const auto& [r, f] : row_freq) {
    model.rows.residues.push_back(r);
    model.rows.frequency.push_back(f);
  }
  for (const auto& [r, f] : col_freq) {
    model.cols.residues.push_back(r);
    model.cols.frequency.push_back(f);
  }
  order_axis(ens, model.rows, sort);
  order_axis(ens, model.cols, sort);

  std::map<std::uint32_t, std::uint32_t> row_pos, col_pos;
  for (std::uint32_t i = 0; i < model.rows.residues.size(); ++i) row_pos[model.rows.residues[i]] = i;
  for (std::uint32_t i = 0; i < model.cols.residues.size(); ++i) col_pos[model.cols.residues[i]] = i;
  for (const auto& r : raw) model.cells.push_back({r.aap, row_pos[r.r1], col_pos[r.r2], r.count});
  std::sort(model.cells.begin(), model.cells.end(),
            [](const auto& a, const auto& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
  return model;
}

}  // namespace dockscope
