// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/similarity.hpp"

#include <algorithm>
#include <iterator>

#include "dockscope/contacts.hpp"
#include "dockscope/error.hpp"

namespace dockscope {

ContactProfile profile_of_cc(const ComplexEnsemble& ens, CcIndex cc) {
  ContactProfile prof;
  prof.id = ens.configurations().at(cc).id;
  prof.covers.assign(ens.proteins().size(), true);
  for (PpcIndex p : ens.ppcs_of_cc(cc)) {
    const Ppc& ppc = ens.ppcs()[p];
    auto& keys = prof.interfaces[ens.ppes()[ppc.ppe].pair];
    for (const auto& inst : ppc.contacts) keys.push_back(ens.aaps()[inst.aap].key);
    std::sort(keys.begin(), keys.end());
  }
  return prof;
}

ContactProfile profile_of_reference(const ComplexEnsemble& ens, const ReferenceConfiguration& ref) {
  if (ref.proteins.size() != ens.proteins().size())
    fail(ErrorCode::invalid_argument, "reference does not match the ensemble's proteins");
  ContactProfile prof;
  prof.id = ref.id;
  for (const auto& p : ref.proteins) prof.covers.push_back(p.has_value());
  for (const auto& pc : detect_contacts(ref, ens.cutoff())) {
    auto& keys = prof.interfaces[pc.pair];
    for (const auto& c : pc.contacts)
      keys.push_back(AapKey{{pc.pair.first, c.residue_first}, {pc.pair.second, c.residue_second}});
    std::sort(keys.begin(), keys.end());
  }
  return prof;
}

double jaccard(std::span<const AapKey> a, std::span<const AapKey> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double ppc_similarity(const ComplexEnsemble& ens, PpcIndex a, PpcIndex b) {
  const Ppc& pa = ens.ppcs().at(a);
  const Ppc& pb = ens.ppcs().at(b);
  if (pa.ppe != pb.ppe) fail(ErrorCode::invalid_argument, "pair configurations belong to different protein pairs");
  std::vector<AapKey> ka, kb;
  for (const auto& inst : pa.contacts) ka.push_back(ens.aaps()[inst.aap].key);
  for (const auto& inst : pb.contacts) kb.push_back(ens.aaps()[inst.aap].key);
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return jaccard(ka, kb);
}

std::optional<double> cc_similarity(const ContactProfile& a, const ContactProfile& b) {
  auto covered = [](const ContactProfile& p, ProteinIndex i) { return i < p.covers.size() && p.covers[i]; };
  std::vector<ProteinPair> pairs;
  for (const auto& [pair, _] : a.interfaces) pairs.push_back(pair);
  for (const auto& [pair, _] : b.interfaces) pairs.push_back(pair);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  double sum = 0;
  std::size_t used = 0;
  static const std::vector<AapKey> none;
  for (const auto& pair : pairs) {
    if (!covered(a, pair.first) || !covered(a, pair.second) || !covered(b, pair.first) ||
        !covered(b, pair.second))
      continue;
    auto ia = a.interfaces.find(pair);
    auto ib = b.interfaces.find(pair);
    const auto& ka = ia == a.interfaces.end() ? none : ia->second;
    const auto& kb = ib == b.interfaces.end() ? none : ib->second;
    sum += (ka.empty() || kb.empty()) ? 0.0 : jaccard(ka, kb);
    ++used;
  }
  if (used == 0) return std::nullopt;
  return sum / static_cast<double>(used);
}

std::vector<ScoredItem> rank_by_similarity(std::vector<ScoredItem> items) {
  std::sort(items.begin(), items.end(), [](const ScoredItem& x, const ScoredItem& y) {
    if (x.score.has_value() != y.score.has_value()) return x.score.has_value();
    if (x.score && *x.score != *y.score) return *x.score > *y.score;
    return x.index < y.index;
  });
  return items;
}

std::vector<std::optional<double>> similarity_column(const ComplexEnsemble& ens, const ContactProfile& reference) {
  std::vector<std::optional<double>> col(ens.cc_count());
  for (CcIndex cc = 0; cc < ens.cc_count(); ++cc) col[cc] = cc_similarity(profile_of_cc(ens, cc), reference);
  return col;
}

ContactListModel contact_list_model(const ComplexEnsemble& ens, ProteinPair pair, std::span<const PpcIndex> ppcs,
                                    std::optional<PpcIndex> reference) {
  auto ppe = ens.find_ppe(pair);
  if (!ppe) fail(ErrorCode::not_found, "proteins are never in contact");
  auto check = [&](PpcIndex i) {
    if (i >= ens.ppcs().size() || ens.ppcs()[i].ppe != *ppe)
      fail(ErrorCode::invalid_argument, "pair configuration does not belong to the requested protein pair");
  };
  for (auto i : ppcs) check(i);
  if (reference) check(*reference);

  auto sides = [&](PpcIndex i) {
    std::array<std::vector<std::uint32_t>, 2> out;
    for (const auto& inst : ens.ppcs()[i].contacts) {
      const auto& key = ens.aaps()[inst.aap].key;
      out[0].push_back(key.first.residue);
      out[1].push_back(key.second.residue);
    }
    for (auto& v : out) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
  };

  ContactListModel model;
  model.pair = pair;
  model.reference = reference;
  std::vector<AapIndex> ref_aaps;
  std::array<std::vector<std::uint32_t>, 2> ref_res;
  if (reference) {
    for (const auto& inst : ens.ppcs()[*reference].contacts) ref_aaps.push_back(inst.aap);
    ref_res = sides(*reference);
  }
  auto has = [](const auto& v, auto x) { return std::binary_search(v.begin(), v.end(), x); };

  std::vector<ScoredItem> order;
  for (auto i : ppcs) order.push_back({i, reference ? std::optional(ppc_similarity(ens, i, *reference)) : std::nullopt});
  if (reference) order = rank_by_similarity(std::move(order));
  for (const auto& item : order) {
    ContactListEntry e;
    e.ppc = item.index;
    e.similarity = item.score;
    for (const auto& inst : ens.ppcs()[e.ppc].contacts) {
      e.aaps.push_back(inst.aap);
      e.aap_shared.push_back(reference && has(ref_aaps, inst.aap));
    }
    e.residues = sides(e.ppc);
    for (int s = 0; s < 2; ++s) {
      for (auto r : e.residues[s]) e.residue_shared[s].push_back(reference && has(ref_res[s], r));
      for (auto r : ref_res[s])
        if (!has(e.residues[s], r)) e.missing[s].push_back(r);
    }
    model.entries.push_back(std::move(e));
  }
  return model;
}

}  // namespace dockscope
