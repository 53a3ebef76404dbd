// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <tuple>

#include <gtest/gtest.h>

#include "dockscope/error.hpp"
#include "dockscope/selection.hpp"
#include "dockscope/similarity.hpp"
#include "dockscope/synthetic.hpp"
#include "dockscope/views.hpp"
#include "oracles.hpp"

using namespace dockscope;
using namespace dockscope::oracle;

namespace {

std::vector<ProteinViewModel::Column> gaps(const ProteinViewModel& m) {
  std::vector<ProteinViewModel::Column> out;
  for (const auto& c : m.columns)
    if (c.gap) out.push_back(c);
  return out;
}

const ComplexEnsemble& synthetic() {
  static const ComplexEnsemble ens = [] {
    SyntheticOptions o;
    o.configurations = 50;
    o.proteins = 4;
    o.residues = 40;
    return build_hierarchy(synthetic_ensemble(o));
  }();
  return ens;
}

}  // namespace

TEST(ProteinView, CondensedBoundary) {
  // Interacting primary residues 0, 26 and 53: a 25-run (1..25) and a 26-run (27..52).
  auto ens = ensemble_from_interfaces({{{0, 0}, {26, 1}, {53, 2}}}, 60);
  auto full = protein_view_model(ens, 0, ens.all_ccs(), false);
  EXPECT_EQ(full.columns.size(), 60u);
  EXPECT_TRUE(gaps(full).empty());

  auto condensed = protein_view_model(ens, 0, ens.all_ccs(), true);
  auto g = gaps(condensed);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].residue, 27u);
  EXPECT_EQ(g[0].length, 26u);
  // 60 residues minus the collapsed 26 plus one gap column; trailing run 54..59 is short.
  EXPECT_EQ(condensed.columns.size(), 60u - 26u + 1u);
  EXPECT_EQ(condensed.totals[26], 1u);
}

TEST(ProteinView, CountsPerPartner) {
  const auto& ens = synthetic();
  auto m = protein_view_model(ens, 0, ens.all_ccs(), false);
  std::vector<std::size_t> totals(ens.proteins()[0].residues.size(), 0);
  for (const auto& aap : ens.aaps()) {
    for (auto side : {aap.key.first, aap.key.second})
      if (side.protein == 0) totals[side.residue] += aap.ccs.count();
  }
  EXPECT_EQ(m.totals, totals);
  std::vector<std::size_t> sum(totals.size(), 0);
  for (const auto& row : m.partners)
    for (std::size_t r = 0; r < row.counts.size(); ++r) sum[r] += row.counts[r];
  EXPECT_EQ(sum, totals);
}

TEST(Overview, EdgeWeightsAndScaling) {
  const auto& ens = synthetic();
  CcSet visible = ens.all_ccs();
  for (CcIndex c = 0; c < ens.cc_count(); c += 3) visible.reset(c);
  auto m = overview_model(ens, visible, BarScaling::independent);
  ASSERT_EQ(m.edges.size(), ens.ppes().size());
  for (const auto& e : m.edges) {
    EXPECT_EQ(e.visible_weight, (ens.ppes()[e.ppe].ccs & visible).count());
    EXPECT_EQ(e.total_weight, ens.ppes()[e.ppe].ccs.count());
  }
  for (const auto& node : m.nodes) {
    double max = 0;
    for (const auto& b : node.bars) max = std::max(max, b.height);
    if (!node.bars.empty()) EXPECT_DOUBLE_EQ(max, 1.0);
  }
  auto abs = overview_model(ens, visible, BarScaling::absolute);
  double global = 0;
  for (const auto& node : abs.nodes)
    for (const auto& b : node.bars) global = std::max(global, b.height);
  EXPECT_DOUBLE_EQ(global, 1.0);
}

TEST(ResidueMatrix, SortsAndCounts) {
  const auto& ens = synthetic();
  const Ppe& ppe = ens.ppes()[0];
  for (auto sort : {AxisSort::sequence, AxisSort::frequency, AxisSort::hydrophobicity, AxisSort::charge}) {
    auto m = residue_matrix_model(ens, ppe.pair, ens.all_ccs(), sort);
    std::size_t total = 0;
    for (const auto& c : m.cells) {
      EXPECT_EQ(c.count, ens.aaps()[c.aap].ccs.count());
      EXPECT_EQ(m.rows.residues[c.row], ens.aaps()[c.aap].key.first.residue);
      EXPECT_EQ(m.cols.residues[c.col], ens.aaps()[c.aap].key.second.residue);
      total += c.count;
    }
    EXPECT_EQ(total, [&] {
      std::size_t t = 0;
      for (auto a : ppe.aaps) t += ens.aaps()[a].ccs.count();
      return t;
    }());
    if (sort == AxisSort::sequence)
      EXPECT_TRUE(std::is_sorted(m.rows.residues.begin(), m.rows.residues.end()));
    if (sort == AxisSort::frequency)
      EXPECT_TRUE(std::is_sorted(m.rows.frequency.begin(), m.rows.frequency.end(), std::greater<>()));
  }
}

TEST(Similarity, Jaccard) {
  AapKey a{{0, 0}, {1, 0}}, b{{0, 1}, {1, 1}}, c{{0, 2}, {1, 2}};
  std::vector<AapKey> x{a, b}, y{b, c};
  EXPECT_DOUBLE_EQ(jaccard(x, y), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(jaccard(x, x), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(x, {}), 0.0);
}

TEST(Similarity, RankingOrder) {
  std::vector<ScoredItem> items{{3, 0.5}, {1, std::nullopt}, {2, 0.9}, {0, 0.5}};
  auto r = rank_by_similarity(items);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].index, 2u);
  EXPECT_EQ(r[1].index, 0u);
  EXPECT_EQ(r[2].index, 3u);
  EXPECT_EQ(r[3].index, 1u);
}

TEST(Similarity, SelfSimilarityIsOne) {
  const auto& ens = synthetic();
  auto col = similarity_column(ens, profile_of_cc(ens, 7));
  ASSERT_EQ(col.size(), ens.cc_count());
  EXPECT_DOUBLE_EQ(*col[7], 1.0);
  for (const auto& v : col)
    if (v) EXPECT_TRUE(*v >= 0.0 && *v <= 1.0);
}

TEST(Similarity, ReferenceProfileMatchesOwnConfiguration) {
  const auto& ens = synthetic();
  ReferenceConfiguration ref{"ref", {}};
  for (const auto& p : ens.configurations()[4].proteins) ref.proteins.emplace_back(p);
  auto a = profile_of_reference(ens, ref);
  auto b = profile_of_cc(ens, 4);
  EXPECT_EQ(a.interfaces, b.interfaces);
  EXPECT_DOUBLE_EQ(*cc_similarity(a, b), 1.0);
}

TEST(Similarity, ContactListRankedByReference) {
  const auto& ens = synthetic();
  const Ppe& ppe = ens.ppes()[0];
  std::vector<PpcIndex> ppcs(ppe.ppcs.begin(), ppe.ppcs.end());
  auto model = contact_list_model(ens, ppe.pair, ppcs, ppcs[0]);
  ASSERT_EQ(model.entries.size(), ppcs.size());
  EXPECT_EQ(model.entries[0].ppc, ppcs[0]);
  for (std::size_t i = 1; i < model.entries.size(); ++i)
    EXPECT_GE(*model.entries[i - 1].similarity, *model.entries[i].similarity);
}

TEST(Selection, PropagationIsStable) {
  const auto& ens = synthetic();
  Selection sel = empty_selection(ens);
  select_aaps(ens, sel, {ens.aaps()[0].key});
  propagate_selection(ens, sel, Propagation::up);
  EXPECT_EQ(sel.items.ccs, ens.aaps()[0].ccs);
  propagate_selection(ens, sel, Propagation::up_then_down);
  Selection once = sel;
  propagate_selection(ens, sel, Propagation::up_then_down);
  EXPECT_EQ(sel, once);
  for (auto a : sel.items.aaps) EXPECT_TRUE((ens.aaps()[a].ccs & sel.items.ccs).any());
}

TEST(Selection, RejectsUnknownIds) {
  const auto& ens = synthetic();
  Selection sel = empty_selection(ens);
  EXPECT_THROW(select_ccs(ens, sel, {static_cast<CcIndex>(ens.cc_count())}), Error);
  EXPECT_THROW(set_primary_protein(ens, sel, 9), Error);
}

namespace {

using CellKey = std::tuple<std::uint32_t, std::uint32_t, std::size_t>;

std::vector<CellKey> cell_keys(const ResidueMatrixModel& m) {
  std::vector<CellKey> out;
  for (const auto& c : m.cells) out.emplace_back(m.rows.residues[c.row], m.cols.residues[c.col], c.count);
  return out;
}

}  // namespace

TEST(Restriction, ViewsOnVisibleSetMatchRestrictedEnsemble) {
  SyntheticOptions o;
  o.configurations = 40;
  o.proteins = 4;
  o.residues = 30;
  o.seed = 11;
  const RawEnsemble raw = synthetic_ensemble(o);
  const ComplexEnsemble full = build_hierarchy(raw);

  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    CcSet visible(full.cc_count());
    RawEnsemble sub = raw;
    sub.configurations.clear();
    for (CcIndex c = 0; c < full.cc_count(); ++c) {
      if (rng() % 3 == 0) continue;
      visible.set(c);
      sub.configurations.push_back(raw.configurations[c]);
    }
    const ComplexEnsemble restricted = build_hierarchy(sub);
    const CcSet all = restricted.all_ccs();
    ASSERT_FALSE(restricted.ppes().empty());

    auto a = overview_model(full, visible, BarScaling::absolute);
    auto b = overview_model(restricted, all, BarScaling::absolute);
    std::map<std::pair<ProteinIndex, ProteinIndex>, std::size_t> wa, wb;
    for (const auto& e : a.edges)
      if (e.visible_weight) wa[{e.pair.first, e.pair.second}] = e.visible_weight;
    for (const auto& e : b.edges) wb[{e.pair.first, e.pair.second}] = e.visible_weight;
    EXPECT_EQ(wa, wb);

    for (const auto& ppe : restricted.ppes()) {
      auto fp = full.find_ppe(ppe.pair);
      ASSERT_TRUE(fp);
      auto ga = ppe_aggregate(full, *fp, visible);
      auto gb = ppe_aggregate(restricted, restricted.find_ppe(ppe.pair).value(), all);
      EXPECT_EQ(ga.n_ppcs, gb.n_ppcs);
      EXPECT_EQ(ga.n_unique_aap, gb.n_unique_aap);
      ASSERT_TRUE(ga.consistency && gb.consistency);
      EXPECT_DOUBLE_EQ(*ga.consistency, *gb.consistency);

      for (auto sort : {AxisSort::sequence, AxisSort::frequency, AxisSort::hydrophobicity}) {
        auto ma = residue_matrix_model(full, ppe.pair, visible, sort);
        auto mb = residue_matrix_model(restricted, ppe.pair, all, sort);
        EXPECT_EQ(ma.rows.residues, mb.rows.residues);
        EXPECT_EQ(ma.cols.residues, mb.cols.residues);
        EXPECT_EQ(cell_keys(ma), cell_keys(mb));
      }

      // Matrix cells sum to the total interface size over visible PPCs.
      auto m = residue_matrix_model(full, ppe.pair, visible, AxisSort::sequence);
      std::size_t cells = 0, contacts = 0;
      for (const auto& c : m.cells) cells += c.count;
      for (PpcIndex p : full.ppes()[*fp].ppcs)
        if (visible.test(full.ppcs()[p].cc)) contacts += full.ppcs()[p].contacts.size();
      EXPECT_EQ(cells, contacts);
    }

    for (ProteinIndex p = 0; p < full.proteins().size(); ++p) {
      auto va = protein_view_model(full, p, visible, true);
      auto vb = protein_view_model(restricted, p, all, true);
      EXPECT_EQ(va.totals, vb.totals);
      ASSERT_EQ(va.columns.size(), vb.columns.size());
      for (std::size_t i = 0; i < va.columns.size(); ++i) {
        EXPECT_EQ(va.columns[i].gap, vb.columns[i].gap);
        EXPECT_EQ(va.columns[i].residue, vb.columns[i].residue);
        EXPECT_EQ(va.columns[i].length, vb.columns[i].length);
      }
    }
  }
}
