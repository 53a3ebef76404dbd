// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/contacts.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <tuple>
#include <cmath>
#include <unordered_map>

#include "cell_grid.hpp"
#include "dockscope/error.hpp"

namespace dockscope {

std::vector<PairContacts> detect_contacts(std::span<const ProteinCoords* const> proteins, double cutoff) {
  if (!(cutoff > 0)) fail(ErrorCode::invalid_argument, "contact cutoff must be positive");
  const double cutoff2 = cutoff * cutoff;

  std::vector<std::optional<detail::CellGrid>> grids(proteins.size());
  for (std::size_t p = 0; p < proteins.size(); ++p)
    if (proteins[p] && !proteins[p]->atoms.empty()) grids[p].emplace(proteins[p]->atoms, cutoff);

  std::vector<PairContacts> out;
  std::unordered_map<std::uint64_t, double> best;  // (res_first << 32 | res_second) -> min d^2
  // Every protein pair is scanned: the atoms of the first protein are probed
  // against the cell list of the second.
  for (std::size_t p = 0; p < proteins.size(); ++p) {
    if (!grids[p]) continue;
    for (std::size_t q = p + 1; q < proteins.size(); ++q) {
      if (!grids[q]) continue;
      best.clear();
      for (const auto& a : proteins[p]->atoms) {
        grids[q]->for_each_near(a.position, cutoff2, [&](const AtomSite& b, double d2) {
          std::uint64_t key = (static_cast<std::uint64_t>(a.residue) << 32) | b.residue;
          auto [it, inserted] = best.emplace(key, d2);
          if (!inserted && d2 < it->second) it->second = d2;
        });
      }
      if (best.empty()) continue;
      PairContacts pc;
      pc.pair = ProteinPair{static_cast<ProteinIndex>(p), static_cast<ProteinIndex>(q)};
      pc.contacts.reserve(best.size());
      for (const auto& [key, d2] : best)
        pc.contacts.push_back(ResidueContact{static_cast<std::uint32_t>(key >> 32),
                                             static_cast<std::uint32_t>(key & 0xffffffffu), std::sqrt(d2)});
      std::sort(pc.contacts.begin(), pc.contacts.end(), [](const auto& x, const auto& y) {
        return std::tie(x.residue_first, x.residue_second) < std::tie(y.residue_first, y.residue_second);
      });
      out.push_back(std::move(pc));
    }
  }
  return out;
}

std::vector<PairContacts> detect_contacts(const Configuration& cc, double cutoff) {
  std::vector<const ProteinCoords*> ptrs;
  for (const auto& p : cc.proteins) ptrs.push_back(&p);
  return detect_contacts(ptrs, cutoff);
}

std::vector<PairContacts> detect_contacts(const ReferenceConfiguration& ref, double cutoff) {
  std::vector<const ProteinCoords*> ptrs;
  for (const auto& p : ref.proteins) ptrs.push_back(p ? &*p : nullptr);
  return detect_contacts(ptrs, cutoff);
}

}  // namespace dockscope
