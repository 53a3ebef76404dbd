// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/amino_acids.hpp"

#include <array>

namespace dockscope {

namespace {

constexpr std::array<AminoAcidInfo, 20> kAminoAcids{{
    {"ALA", 'A', 1.8, Charge::neutral},  {"ARG", 'R', -4.5, Charge::positive},
    {"ASN", 'N', -3.5, Charge::neutral}, {"ASP", 'D', -3.5, Charge::negative},
    {"CYS", 'C', 2.5, Charge::neutral},  {"GLN", 'Q', -3.5, Charge::neutral},
    {"GLU", 'E', -3.5, Charge::negative}, {"GLY", 'G', -0.4, Charge::neutral},
    {"HIS", 'H', -3.2, Charge::positive}, {"ILE", 'I', 4.5, Charge::neutral},
    {"LEU", 'L', 3.8, Charge::neutral},  {"LYS", 'K', -3.9, Charge::positive},
    {"MET", 'M', 1.9, Charge::neutral},  {"PHE", 'F', 2.8, Charge::neutral},
    {"PRO", 'P', -1.6, Charge::neutral}, {"SER", 'S', -0.8, Charge::neutral},
    {"THR", 'T', -0.7, Charge::neutral}, {"TRP", 'W', -0.9, Charge::neutral},
    {"TYR", 'Y', -1.3, Charge::neutral}, {"VAL", 'V', 4.2, Charge::neutral},
}};

}  // namespace

std::string_view to_string(Charge c) {
  switch (c) {
    case Charge::positive: return "positive";
    case Charge::negative: return "negative";
    case Charge::neutral: return "neutral";
  }
  return "neutral";
}

std::optional<AminoAcidInfo> amino_acid(std::string_view code3) {
  for (const auto& aa : kAminoAcids)
    if (aa.code3 == code3) return aa;
  return std::nullopt;
}

std::optional<AminoAcidInfo> amino_acid_by_code1(char code1) {
  for (const auto& aa : kAminoAcids)
    if (aa.code1 == code1) return aa;
  return std::nullopt;
}

char one_letter_code(std::string_view code3) {
  auto aa = amino_acid(code3);
  return aa ? aa->code1 : 'X';
}

double van_der_waals_radius(std::string_view element) {
  if (element == "C") return 1.70;
  if (element == "N") return 1.55;
  if (element == "O") return 1.52;
  if (element == "S") return 1.80;
  if (element == "H") return 1.20;
  if (element == "P") return 1.80;
  if (element == "SE") return 1.90;
  return 1.70;
}

}  // namespace dockscope
