// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/hierarchy.hpp"

#include <algorithm>
#include <unordered_map>

#include "dockscope/error.hpp"
#include "dockscope/parallel.hpp"

namespace dockscope {

namespace {

struct AapKeyHash {
  std::size_t operator()(const AapKey& k) const noexcept {
    std::uint64_t a = (static_cast<std::uint64_t>(k.first.protein) << 32) | k.first.residue;
    std::uint64_t b = (static_cast<std::uint64_t>(k.second.protein) << 32) | k.second.residue;
    return std::hash<std::uint64_t>{}(a * 0x9E3779B97F4A7C15ull ^ b);
  }
};

struct PairScoreColumn {
  std::size_t column;
  ProteinPair pair;
  std::string score;
};

// Splits `pair:<A>:<B>:<score>` columns off the configuration properties.
std::vector<PairScoreColumn> extract_pair_columns(RawEnsemble& raw) {
  std::vector<PairScoreColumn> found;
  for (std::size_t c = 0; c < raw.property_names.size(); ++c) {
    const std::string& name = raw.property_names[c];
    if (name.rfind("pair:", 0) != 0) continue;
    auto p1 = name.find(':', 5);
    auto p2 = p1 == std::string::npos ? std::string::npos : name.find(':', p1 + 1);
    if (p2 == std::string::npos) continue;
    std::string a = name.substr(5, p1 - 5), b = name.substr(p1 + 1, p2 - p1 - 1);
    std::optional<ProteinIndex> ia, ib;
    for (std::size_t p = 0; p < raw.proteins.size(); ++p) {
      if (raw.proteins[p].name == a) ia = static_cast<ProteinIndex>(p);
      if (raw.proteins[p].name == b) ib = static_cast<ProteinIndex>(p);
    }
    if (!ia || !ib || *ia == *ib) {
      raw.warnings.push_back("column '" + name + "' does not name two ensemble proteins; kept as property");
      continue;
    }
    found.push_back({c, ProteinPair::of(*ia, *ib), name.substr(p2 + 1)});
  }
  return found;
}

}  // namespace

std::optional<ProteinIndex> ComplexEnsemble::find_protein(std::string_view name) const {
  for (std::size_t p = 0; p < raw_.proteins.size(); ++p)
    if (raw_.proteins[p].name == name) return static_cast<ProteinIndex>(p);
  return std::nullopt;
}

std::optional<CcIndex> ComplexEnsemble::find_cc(std::string_view id) const {
  auto it = cc_by_id_.find(id);
  if (it == cc_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<PpeIndex> ComplexEnsemble::find_ppe(ProteinPair pair) const {
  auto it = std::lower_bound(ppes_.begin(), ppes_.end(), pair,
                             [](const Ppe& e, const ProteinPair& p) { return e.pair < p; });
  if (it == ppes_.end() || it->pair != pair) return std::nullopt;
  return static_cast<PpeIndex>(it - ppes_.begin());
}

std::optional<AapIndex> ComplexEnsemble::find_aap(const AapKey& key) const {
  auto it = std::lower_bound(aaps_.begin(), aaps_.end(), key,
                             [](const AapRecord& r, const AapKey& k) { return r.key < k; });
  if (it == aaps_.end() || it->key != key) return std::nullopt;
  return static_cast<AapIndex>(it - aaps_.begin());
}

std::optional<PpcIndex> ComplexEnsemble::find_ppc(CcIndex cc, ProteinPair pair) const {
  for (PpcIndex i : cc_ppcs_[cc])
    if (ppes_[ppcs_[i].ppe].pair == pair) return i;
  return std::nullopt;
}

std::optional<std::size_t> ComplexEnsemble::find_property(std::string_view name) const {
  for (std::size_t i = 0; i < raw_.property_names.size(); ++i)
    if (raw_.property_names[i] == name) return i;
  return std::nullopt;
}

std::vector<AapIndex> ComplexEnsemble::aaps_of_cc(CcIndex cc) const {
  std::vector<AapIndex> out;
  for (PpcIndex i : cc_ppcs_[cc])
    for (const auto& inst : ppcs_[i].contacts) out.push_back(inst.aap);
  std::sort(out.begin(), out.end());
  return out;
}

CcSet ComplexEnsemble::ccs_with_aa(AminoAcidId aa) const {
  CcSet s(cc_count());
  for (AapIndex a : aaps_of_aa(aa)) s |= aaps_[a].ccs;
  return s;
}

double ComplexEnsemble::hydrophobicity(AminoAcidId aa) const {
  auto info = amino_acid(residue(aa).name);
  return info ? info->hydrophobicity : 0.0;
}

Charge ComplexEnsemble::charge(AminoAcidId aa) const {
  auto info = amino_acid(residue(aa).name);
  return info ? info->charge : Charge::neutral;
}

ComplexEnsemble assemble_hierarchy(RawEnsemble raw, std::vector<std::vector<PairContacts>> contacts,
                                   double cutoff) {
  const std::size_t n = raw.configurations.size();
  if (contacts.size() != n)
    fail(ErrorCode::internal, "contact lists do not match configuration count");

  ComplexEnsemble ens;
  ens.cutoff_ = cutoff;

  // Pairwise score columns move from configuration properties to PPCs.
  auto pair_columns = extract_pair_columns(raw);
  std::vector<std::vector<std::optional<double>>> pair_values(pair_columns.size());
  if (!pair_columns.empty()) {
    std::vector<bool> drop(raw.property_names.size(), false);
    for (std::size_t k = 0; k < pair_columns.size(); ++k) {
      drop[pair_columns[k].column] = true;
      for (const auto& cfg : raw.configurations) pair_values[k].push_back(cfg.properties[pair_columns[k].column]);
    }
    auto compact = [&](auto& v) {
      std::size_t w = 0;
      for (std::size_t c = 0; c < v.size(); ++c)
        if (!drop[c]) v[w++] = std::move(v[c]);
      v.resize(w);
    };
    compact(raw.property_names);
    for (auto& cfg : raw.configurations) compact(cfg.properties);
  }

  // Canonical, sorted key and pair tables.
  std::vector<AapKey> keys;
  std::vector<ProteinPair> pairs;
  for (const auto& per_cc : contacts)
    for (const auto& pc : per_cc) {
      if (pc.pair.first >= pc.pair.second || pc.pair.second >= raw.proteins.size())
        fail(ErrorCode::internal, "invalid protein pair in contact list");
      pairs.push_back(pc.pair);
      for (const auto& c : pc.contacts)
        keys.push_back(AapKey{{pc.pair.first, c.residue_first}, {pc.pair.second, c.residue_second}});
    }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  ens.ppes_.reserve(pairs.size());
  for (const auto& p : pairs) ens.ppes_.push_back(Ppe{p, {}, CcSet(n), {}});
  std::unordered_map<AapKey, AapIndex, AapKeyHash> key_index;
  key_index.reserve(keys.size());
  ens.aaps_.reserve(keys.size());
  for (const auto& k : keys) {
    key_index.emplace(k, static_cast<AapIndex>(ens.aaps_.size()));
    PpeIndex ppe = *ens.find_ppe(k.pair());
    ens.aaps_.push_back(AapRecord{k, ppe, CcSet(n)});
    ens.ppes_[ppe].aaps.push_back(static_cast<AapIndex>(ens.aaps_.size() - 1));
  }

  ens.cc_ppcs_.resize(n);
  for (std::size_t cc = 0; cc < n; ++cc) {
    for (const auto& pc : contacts[cc]) {
      if (pc.contacts.empty()) continue;
      PpeIndex ppe = *ens.find_ppe(pc.pair);
      Ppc ppc;
      ppc.cc = static_cast<CcIndex>(cc);
      ppc.ppe = ppe;
      ppc.contacts.reserve(pc.contacts.size());
      for (const auto& c : pc.contacts) {
        AapIndex a = key_index.at(AapKey{{pc.pair.first, c.residue_first}, {pc.pair.second, c.residue_second}});
        ppc.contacts.push_back(AapInstance{a, c.min_distance});
        ens.aaps_[a].ccs.set(cc);
      }
      std::sort(ppc.contacts.begin(), ppc.contacts.end(),
                [](const auto& x, const auto& y) { return x.aap < y.aap; });
      for (std::size_t k = 0; k < pair_columns.size(); ++k)
        if (pair_columns[k].pair == pc.pair && pair_values[k][cc])
          ppc.scores.emplace(pair_columns[k].score, *pair_values[k][cc]);
      PpcIndex idx = static_cast<PpcIndex>(ens.ppcs_.size());
      ens.ppes_[ppe].ppcs.push_back(idx);
      ens.ppes_[ppe].ccs.set(cc);
      ens.cc_ppcs_[cc].push_back(idx);
      ens.ppcs_.push_back(std::move(ppc));
    }
  }

  ens.aa_aaps_.resize(raw.proteins.size());
  for (std::size_t p = 0; p < raw.proteins.size(); ++p) ens.aa_aaps_[p].resize(raw.proteins[p].residues.size());
  for (AapIndex a = 0; a < ens.aaps_.size(); ++a) {
    const AapKey& k = ens.aaps_[a].key;
    if (k.first.residue >= ens.aa_aaps_[k.first.protein].size() ||
        k.second.residue >= ens.aa_aaps_[k.second.protein].size())
      fail(ErrorCode::internal, "contact references a residue outside its protein");
    ens.aa_aaps_[k.first.protein][k.first.residue].push_back(a);
    ens.aa_aaps_[k.second.protein][k.second.residue].push_back(a);
  }

  for (std::size_t cc = 0; cc < n; ++cc)
    ens.cc_by_id_.emplace(raw.configurations[cc].id, static_cast<CcIndex>(cc));
  ens.raw_ = std::move(raw);
  return ens;
}

ComplexEnsemble build_hierarchy(RawEnsemble raw, const HierarchyOptions& options) {
  if (!(options.cutoff > 0)) fail(ErrorCode::invalid_argument, "contact cutoff must be positive");
  std::vector<std::vector<PairContacts>> contacts(raw.configurations.size());
  parallel_for(0, raw.configurations.size(), [&](std::size_t i) {
    contacts[i] = detect_contacts(raw.configurations[i], options.cutoff);
  });
  return assemble_hierarchy(std::move(raw), std::move(contacts), options.cutoff);
}

}  // namespace dockscope
