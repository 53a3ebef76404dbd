// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/selection.hpp"

#include <algorithm>

#include "dockscope/error.hpp"

namespace dockscope {

namespace {

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void anchor_at(Selection& sel, Level level) {
  sel.anchor_level = level;
  sel.anchor = LevelItems{CcSet(sel.items.ccs.size()), {}, {}, {}, {}};
  switch (level) {
    case Level::cc: sel.anchor.ccs = sel.items.ccs; break;
    case Level::ppe: sel.anchor.ppes = sel.items.ppes; break;
    case Level::ppc: sel.anchor.ppcs = sel.items.ppcs; break;
    case Level::aap: sel.anchor.aaps = sel.items.aaps; break;
    case Level::aa: sel.anchor.aas = sel.items.aas; break;
  }
}

}  // namespace

Selection empty_selection(const ComplexEnsemble& ens) {
  Selection sel;
  sel.items.ccs = CcSet(ens.cc_count());
  sel.anchor.ccs = CcSet(ens.cc_count());
  return sel;
}

void select_ccs(const ComplexEnsemble& ens, Selection& sel, std::vector<CcIndex> ccs) {
  CcSet s = resolve_subject(CcIds{std::move(ccs)}, {ens});
  sel.items.ccs = std::move(s);
  anchor_at(sel, Level::cc);
}

void select_ppes(const ComplexEnsemble& ens, Selection& sel, std::vector<ProteinPair> pairs) {
  std::vector<PpeIndex> out;
  for (const auto& p : pairs) {
    auto ppe = ens.find_ppe(p);
    if (!ppe) fail(ErrorCode::not_found, "protein pair is never in contact");
    out.push_back(*ppe);
  }
  sort_unique(out);
  sel.items.ppes = std::move(out);
  anchor_at(sel, Level::ppe);
}

void select_ppcs(const ComplexEnsemble& ens, Selection& sel, std::vector<PpcIndex> ppcs) {
  for (PpcIndex i : ppcs)
    if (i >= ens.ppcs().size()) fail(ErrorCode::not_found, "unknown pair configuration");
  sort_unique(ppcs);
  sel.items.ppcs = std::move(ppcs);
  anchor_at(sel, Level::ppc);
}

void select_aaps(const ComplexEnsemble& ens, Selection& sel, std::vector<AapKey> keys) {
  std::vector<AapIndex> out;
  for (const auto& k : keys) {
    auto a = ens.find_aap(k);
    if (!a) fail(ErrorCode::not_found, "amino acid pair is never in contact");
    out.push_back(*a);
  }
  sort_unique(out);
  sel.items.aaps = std::move(out);
  anchor_at(sel, Level::aap);
}

void select_aas(const ComplexEnsemble& ens, Selection& sel, std::vector<AminoAcidId> aas) {
  for (const auto& aa : aas)
    if (aa.protein >= ens.proteins().size() || aa.residue >= ens.proteins()[aa.protein].residues.size())
      fail(ErrorCode::not_found, "unknown amino acid");
  sort_unique(aas);
  sel.items.aas = std::move(aas);
  anchor_at(sel, Level::aa);
}

void select_protein_view_cells(const ComplexEnsemble& ens, Selection& sel, ProteinIndex primary,
                               const std::vector<std::pair<std::uint32_t, ProteinIndex>>& cells,
                               const CcSet& visible) {
  std::vector<AminoAcidId> aas;
  std::vector<AapIndex> aaps;
  for (const auto& [residue, partner] : cells) {
    AminoAcidId aa{primary, residue};
    if (primary >= ens.proteins().size() || residue >= ens.proteins()[primary].residues.size())
      fail(ErrorCode::not_found, "unknown amino acid");
    aas.push_back(aa);
    for (AapIndex a : ens.aaps_of_aa(aa)) {
      const AapRecord& rec = ens.aaps()[a];
      if (!rec.key.pair().contains(partner) || (rec.ccs & visible).none()) continue;
      aaps.push_back(a);
      aas.push_back(rec.key.first.protein == primary ? rec.key.second : rec.key.first);
    }
  }
  sort_unique(aas);
  sort_unique(aaps);
  sel.items.aas = std::move(aas);
  sel.items.aaps = std::move(aaps);
  anchor_at(sel, Level::aap);
}

void propagate_selection(const ComplexEnsemble& ens, Selection& sel, Propagation direction) {
  if (direction == Propagation::up || direction == Propagation::up_then_down) {
    const LevelItems& a = sel.anchor;
    switch (sel.anchor_level) {
      case Level::cc: sel.items.ccs = a.ccs; break;
      case Level::ppe: {
        CcSet s(ens.cc_count());
        for (PpeIndex i : a.ppes) s |= ens.ppes()[i].ccs;
        sel.items.ccs = std::move(s);
        break;
      }
      case Level::ppc: {
        CcSet s(ens.cc_count());
        for (PpcIndex i : a.ppcs) s.set(ens.ppcs()[i].cc);
        sel.items.ccs = std::move(s);
        break;
      }
      case Level::aap: {
        CcSet s(ens.cc_count());
        for (AapIndex i : a.aaps) s |= ens.aaps()[i].ccs;
        sel.items.ccs = std::move(s);
        break;
      }
      case Level::aa: {
        CcSet s(ens.cc_count());
        for (const auto& aa : a.aas) s |= ens.ccs_with_aa(aa);
        sel.items.ccs = std::move(s);
        break;
      }
    }
  }
  if (direction == Propagation::down || direction == Propagation::up_then_down) {
    LevelItems& it = sel.items;
    it.ppes.clear();
    it.ppcs.clear();
    it.aaps.clear();
    it.aas.clear();
    for (auto cc = it.ccs.find_first(); cc != CcSet::npos; cc = it.ccs.find_next(cc)) {
      for (PpcIndex p : ens.ppcs_of_cc(static_cast<CcIndex>(cc))) {
        it.ppcs.push_back(p);
        it.ppes.push_back(ens.ppcs()[p].ppe);
        for (const auto& inst : ens.ppcs()[p].contacts) it.aaps.push_back(inst.aap);
      }
    }
    sort_unique(it.ppes);
    sort_unique(it.ppcs);
    sort_unique(it.aaps);
    for (AapIndex a : it.aaps) {
      it.aas.push_back(ens.aaps()[a].key.first);
      it.aas.push_back(ens.aaps()[a].key.second);
    }
    sort_unique(it.aas);
  }
}

void set_primary_protein(const ComplexEnsemble& ens, Selection& sel, ProteinIndex p) {
  if (p >= ens.proteins().size()) fail(ErrorCode::not_found, "unknown protein");
  sel.primary_protein = p;
}

void set_primary_ppe(const ComplexEnsemble& ens, Selection& sel, ProteinPair pair) {
  if (pair.second >= ens.proteins().size() || pair.first == pair.second)
    fail(ErrorCode::not_found, "unknown protein pair");
  sel.primary_ppe = pair;
}

}  // namespace dockscope
