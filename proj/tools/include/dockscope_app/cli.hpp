// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dockscope/error.hpp"

namespace dockscope::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitScript = 3;
inline constexpr int kExitInternal = 4;

int exit_code(ErrorCode code);

struct ExportTarget {
  std::string kind;
  std::filesystem::path path;
};

/// Parses "kind:path".
ExportTarget parse_export(std::string_view text);

struct RunOptions {
  std::filesystem::path input;
  std::filesystem::path mapping;
  std::optional<std::filesystem::path> properties;
  std::optional<std::filesystem::path> script;
  std::vector<ExportTarget> exports;
  double cutoff = 5.0;
  double spacing = 1.0;
  double iso = 0.10;  // fraction of each channel's maximum
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::optional<std::string> primary;     // protein
  std::optional<std::string> primary_cc;  // similarity reference inside the ensemble
  std::optional<std::filesystem::path> reference;  // external similarity reference
  bool condensed = false;
  bool include_hetatm = false;
  bool include_hydrogens = false;
};

/// Loads, filters and exports. Returns an exit code; errors are reported on `err`.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::vector<std::size_t> n{100, 200, 400};
  std::vector<std::size_t> m{4};
  std::size_t residues = 60;
  std::size_t atoms_per_residue = 4;
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
};

struct BenchCell {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t atoms = 0;  // per configuration
  double seconds = 0;     // median hierarchy build time
};

std::vector<BenchCell> bench(const BenchOptions& options);

std::string sha256_hex(std::string_view data);

/// Command-line entry point (run, bench, serve, synth).
int main_entry(int argc, char** argv);

}  // namespace dockscope::app
