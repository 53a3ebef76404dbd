// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dockscope/ingest.hpp"

namespace dockscope {

/// Random docking-like ensembles. Proteins are spherical shells of residues;
/// partners dock by bringing two surface residues into contact. Each
/// configuration jitters one of a few recurring binding modes, so contacts
/// repeat across the ensemble the way docking decoys cluster.
struct SyntheticOptions {
  std::size_t configurations = 100;
  std::size_t proteins = 4;
  std::size_t residues = 60;  // per protein
  std::size_t atoms_per_residue = 4;  // 1..6
  std::size_t binding_modes = 3;
  double jitter_degrees = 6.0;
  std::uint64_t seed = 1;
};

/// Properties: "score" (lower is better), "energy" and "cluster" (binding
/// mode, 1-based). Protein i is named "P<i+1>" on chain 'A' + i.
RawEnsemble synthetic_ensemble(const SyntheticOptions& options);

/// Three-protein ensemble with a planted drill-down: `aap` is present in
/// exactly `aap_ccs.size()` configurations and `residue` interacts only in
/// `planted_cc`, which is one of them. Names use the "A:R12" notation.
struct CaseScenario {
  RawEnsemble ensemble;
  std::string aap_first;   // e.g. "A:R12"
  std::string aap_second;  // e.g. "B:D30"
  std::string residue;     // e.g. "C:K7"
  std::vector<std::string> aap_ccs;
  std::string planted_cc;
};

CaseScenario case_scenario(std::size_t configurations = 200, std::size_t with_aap = 35, std::uint64_t seed = 7);

ChainMapping mapping_of(const RawEnsemble& ensemble);

/// Atoms of one configuration as PDB records (chains from the protein order).
std::vector<Atom> configuration_atoms(const RawEnsemble& ensemble, std::size_t cc);

/// Writes `<id>.pdb` per configuration plus mapping.csv and properties.csv.
void write_ensemble_files(const RawEnsemble& ensemble, const std::filesystem::path& dir);

}  // namespace dockscope
