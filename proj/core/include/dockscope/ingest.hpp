// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dockscope/geometry.hpp"
#include "dockscope/pdb.hpp"

namespace dockscope {

inline constexpr int kMaxProteins = 12;

/// Chain identifier to named protein. Color index is the row order.
class ChainMapping {
 public:
  struct Entry {
    char chain;
    std::string protein;
    int color;
  };

  /// Delimited text, one `chain,protein_name` row per line. Blank lines and
  /// lines starting with '#' are skipped; an optional `chain,protein` header
  /// row is tolerated.
  static ChainMapping parse(std::string_view text);

  void add(char chain, std::string protein);
  const Entry* find_chain(char chain) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

/// External per-configuration properties (scores, energies).
struct PropertyTable {
  std::vector<std::string> names;
  std::map<std::string, std::vector<std::optional<double>>> rows;

  /// Header `id,<prop1>,<prop2>,...`; comma or tab delimited. Empty cells and
  /// NA/NaN mark absent values. Non-finite numbers are rejected.
  static PropertyTable parse(std::string_view text);
};

struct Residue {
  int seq = 0;
  char icode = ' ';
  std::string name;

  friend bool operator==(const Residue&, const Residue&) = default;
};

/// Compact atom used inside an ensemble. `residue` indexes the owning
/// protein's residue list.
struct AtomSite {
  Vec3 position = Vec3::Zero();
  std::uint32_t residue = 0;
  std::array<char, 4> name{};
  std::array<char, 2> element{};

  std::string_view element_symbol() const;
  std::string_view atom_name() const;
};

struct ProteinInfo {
  std::string name;
  char chain = ' ';
  int color = 0;
  std::vector<Residue> residues;
};

struct ProteinCoords {
  std::vector<AtomSite> atoms;
};

/// One complex configuration. `proteins` is indexed like RawEnsemble::proteins
/// and `properties` like RawEnsemble::property_names.
struct Configuration {
  std::string id;
  std::vector<ProteinCoords> proteins;
  std::vector<std::optional<double>> properties;
};

struct RawEnsemble {
  std::vector<ProteinInfo> proteins;
  std::vector<std::string> property_names;
  std::vector<Configuration> configurations;
  std::vector<std::string> warnings;
};

struct LoadOptions {
  ParseOptions parse;
};

/// A parsed structure keyed by its configuration id.
struct NamedStructure {
  std::string id;
  std::vector<Atom> atoms;
  std::string source;  // file name, for error messages
};

/// Natural ordering of configuration ids ("cc2" < "cc10").
bool natural_less(std::string_view a, std::string_view b);

/// Loads a directory of structure files (id = file stem) or one multi-model
/// file (id = model number).
RawEnsemble load_ensemble(const std::filesystem::path& input, const ChainMapping& mapping,
                          const PropertyTable* properties = nullptr,
                          const LoadOptions& options = {});

/// Builds an ensemble from already-parsed structures; configurations come
/// out sorted by id. Used by load_ensemble and by in-memory uploads.
RawEnsemble assemble_ensemble(std::vector<NamedStructure> structures, const ChainMapping& mapping,
                              const PropertyTable* properties = nullptr);

/// Configuration outside the ensemble, e.g. a crystal structure. Proteins
/// absent from the file are nullopt. Residues are mapped to the ensemble's
/// residue indices by (seq, insertion code); residues unknown to the
/// ensemble get indices past the end of the protein's residue list.
struct ReferenceConfiguration {
  std::string id;
  std::vector<std::optional<ProteinCoords>> proteins;
};

ReferenceConfiguration make_reference(std::string id, std::span<const Atom> atoms,
                                      const ChainMapping& mapping,
                                      std::span<const ProteinInfo> proteins);

ReferenceConfiguration load_reference_configuration(const std::filesystem::path& file,
                                                    const ChainMapping& mapping,
                                                    std::span<const ProteinInfo> proteins,
                                                    const LoadOptions& options = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dockscope
