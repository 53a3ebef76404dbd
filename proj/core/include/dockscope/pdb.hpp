// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dockscope/geometry.hpp"

namespace dockscope {

/// One coordinate record from a fixed-column PDB file.
struct Atom {
  int serial = 0;
  std::string name;     // atom name, trimmed ("CA")
  std::string element;  // upper case symbol ("C", "FE")
  Vec3 position = Vec3::Zero();
  int residue_seq = 0;
  char insertion_code = ' ';
  std::string residue_name;  // three-letter code
  char chain_id = ' ';
  bool hetero = false;

  bool standard_residue() const;
  bool hydrogen() const { return element == "H" || element == "D"; }
};

struct Model {
  int model_id = 1;
  std::vector<Atom> atoms;
};

struct ParseOptions {
  bool include_hetatm = false;
  bool include_hydrogens = false;
};

/// Parses ATOM/HETATM records grouped by MODEL/ENDMDL blocks. A file without
/// MODEL records yields a single model with id 1. Only the blank or first
/// alternate location of each atom is kept.
///
/// Throws Error(parse) with the 1-based line number for malformed coordinate
/// fields and Error(empty_structure) when no atoms remain.
std::vector<Model> parse_structure(std::string_view text, const ParseOptions& options = {});

/// Writes models back as fixed-column ATOM/HETATM records (coordinates with
/// three decimals), wrapping them in MODEL/ENDMDL when there is more than one.
std::string write_structure(std::span<const Model> models);

}  // namespace dockscope
