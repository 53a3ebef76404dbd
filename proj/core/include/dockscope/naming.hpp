// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "dockscope/hierarchy.hpp"

namespace dockscope {

// Textual ids shared by filter scripts, the HTTP API and exports:
//   protein      P1
//   amino acid   P1:R299, P1:ARG299, P1:299, P1:R299A (insertion code)
//   AAP          two amino acids of different proteins, in any order

std::string format_aa(const ComplexEnsemble& ens, AminoAcidId aa);
std::string format_aap(const ComplexEnsemble& ens, const AapKey& key);
std::string format_pair(const ComplexEnsemble& ens, ProteinPair pair);

ProteinIndex parse_protein(const ComplexEnsemble& ens, std::string_view name);
CcIndex parse_cc(const ComplexEnsemble& ens, std::string_view id);
AminoAcidId parse_aa(const ComplexEnsemble& ens, std::string_view text);
ProteinPair parse_pair(const ComplexEnsemble& ens, std::string_view a, std::string_view b);

/// Canonical key (lower protein index first). Throws for same-protein input.
AapKey make_aap_key(AminoAcidId a, AminoAcidId b);

}  // namespace dockscope
