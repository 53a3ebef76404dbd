// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>

namespace dockscope {

enum class Charge { positive, negative, neutral };

std::string_view to_string(Charge c);

/// Bundled per-residue constants for the 20 standard amino acids.
struct AminoAcidInfo {
  std::string_view code3;
  char code1;
  double hydrophobicity;  // Kyte-Doolittle
  Charge charge;          // at neutral pH
};

/// Lookup by three-letter code (case-sensitive, upper case). Returns nullopt
/// for non-standard residues.
std::optional<AminoAcidInfo> amino_acid(std::string_view code3);
std::optional<AminoAcidInfo> amino_acid_by_code1(char code1);

inline bool is_standard_amino_acid(std::string_view code3) {
  return amino_acid(code3).has_value();
}

/// One-letter code, or 'X' for non-standard residues.
char one_letter_code(std::string_view code3);

/// Van der Waals radius in Angstrom for an element symbol; unknown elements
/// fall back to the carbon radius.
double van_der_waals_radius(std::string_view element);

}  // namespace dockscope
