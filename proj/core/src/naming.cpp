// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/naming.hpp"

#include <cctype>
#include <charconv>

#include "dockscope/amino_acids.hpp"
#include "dockscope/error.hpp"

namespace dockscope {

std::string format_aa(const ComplexEnsemble& ens, AminoAcidId aa) {
  const Residue& r = ens.residue(aa);
  std::string out = ens.proteins()[aa.protein].name + ":" + one_letter_code(r.name) + std::to_string(r.seq);
  if (r.icode != ' ') out += r.icode;
  return out;
}

std::string format_aap(const ComplexEnsemble& ens, const AapKey& key) {
  return format_aa(ens, key.first) + " " + format_aa(ens, key.second);
}

std::string format_pair(const ComplexEnsemble& ens, ProteinPair pair) {
  return ens.proteins()[pair.first].name + " " + ens.proteins()[pair.second].name;
}

ProteinIndex parse_protein(const ComplexEnsemble& ens, std::string_view name) {
  auto p = ens.find_protein(name);
  if (!p) fail(ErrorCode::not_found, "unknown protein '" + std::string(name) + "'", std::string(name));
  return *p;
}

CcIndex parse_cc(const ComplexEnsemble& ens, std::string_view id) {
  auto c = ens.find_cc(id);
  if (!c) fail(ErrorCode::not_found, "unknown configuration '" + std::string(id) + "'", std::string(id));
  return *c;
}

AminoAcidId parse_aa(const ComplexEnsemble& ens, std::string_view text) {
  auto bad = [&](const std::string& why) -> AminoAcidId {
    fail(ErrorCode::not_found, "amino acid '" + std::string(text) + "': " + why, std::string(text));
  };
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) return bad("expected <protein>:<residue>");
  ProteinIndex protein = parse_protein(ens, text.substr(0, colon));
  std::string_view tok = text.substr(colon + 1);

  std::size_t i = 0;
  while (i < tok.size() && std::isalpha(static_cast<unsigned char>(tok[i]))) ++i;
  std::string code(tok.substr(0, i));
  std::size_t j = i;
  if (j < tok.size() && tok[j] == '-') ++j;
  while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
  int seq = 0;
  auto [ptr, ec] = std::from_chars(tok.data() + i, tok.data() + j, seq);
  if (ec != std::errc() || ptr != tok.data() + j) return bad("missing sequence number");
  char icode = ' ';
  if (j < tok.size()) {
    if (j + 1 != tok.size() || !std::isalpha(static_cast<unsigned char>(tok[j]))) return bad("malformed residue");
    icode = tok[j];
  }
  for (auto& c : code) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

  if (code.size() == 2 || code.size() > 3) return bad("malformed residue code");

  const auto& residues = ens.proteins()[protein].residues;
  for (std::uint32_t r = 0; r < residues.size(); ++r) {
    if (residues[r].seq != seq || residues[r].icode != icode) continue;
    if (code.size() == 1 && one_letter_code(residues[r].name) != code[0])
      return bad("residue " + std::to_string(seq) + " is " + residues[r].name);
    if (code.size() == 3 && residues[r].name != code)
      return bad("residue " + std::to_string(seq) + " is " + residues[r].name);
    return AminoAcidId{protein, r};
  }
  return bad("no such residue");
}

ProteinPair parse_pair(const ComplexEnsemble& ens, std::string_view a, std::string_view b) {
  ProteinIndex pa = parse_protein(ens, a), pb = parse_protein(ens, b);
  if (pa == pb) fail(ErrorCode::invalid_argument, "a protein pair needs two different proteins");
  return ProteinPair::of(pa, pb);
}

AapKey make_aap_key(AminoAcidId a, AminoAcidId b) {
  if (a.protein == b.protein)
    fail(ErrorCode::invalid_argument, "an amino acid pair needs residues of two different proteins");
  return a.protein < b.protein ? AapKey{a, b} : AapKey{b, a};
}

}  // namespace dockscope
