// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls the code under test.
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "dockscope/contacts.hpp"
#include "dockscope/density.hpp"
#include "dockscope/filter.hpp"
#include "dockscope/hierarchy.hpp"
#include "dockscope/isosurface.hpp"

namespace dockscope::oracle {

using Rng = std::mt19937_64;

// ---- contacts -------------------------------------------------------------

/// All-pairs residue contact scan, O(atoms^2).
std::vector<PairContacts> brute_contacts(const Configuration& cc, double cutoff);

/// A configuration with `proteins` proteins of `residues` residues, atoms
/// scattered in a box small enough to produce contacts at 4-6 A.
RawEnsemble random_box_ensemble(Rng& rng, std::size_t configurations, std::size_t proteins, std::size_t residues);

// ---- aggregates -----------------------------------------------------------

/// Interface of one PPC as a set of (residue_first, residue_second).
using Interface = std::set<std::pair<std::uint32_t, std::uint32_t>>;

/// Two-protein ensemble whose CC i has interface `interfaces[i]` (empty =
/// no contact). Built without geometry.
ComplexEnsemble ensemble_from_interfaces(const std::vector<Interface>& interfaces, std::uint32_t residues);

/// (1/N) * sum over unique keys of (#sets containing key)/(#sets).
double brute_consistency(const std::vector<Interface>& sets);

// ---- filters --------------------------------------------------------------

struct OracleFilter {
  FilterKind kind;
  std::set<CcIndex> subject;
  bool enabled = true;
};

/// Plain std::set evaluation of an ordered filter list.
std::set<CcIndex> interpret(const std::vector<OracleFilter>& filters, std::size_t cc_count);

std::set<CcIndex> as_set(const CcSet& s);
CcSet as_cc_set(const std::set<CcIndex>& s, std::size_t n);

// ---- geometry -------------------------------------------------------------

Mat3 random_rotation(Rng& rng);

/// Untruncated sum of unnormalized Gaussians at `x`.
double naive_density(std::span<const KernelAtom> atoms, const Vec3& x);

struct MeshTopology {
  std::size_t edges = 0;
  std::size_t non_manifold_edges = 0;  // edge degree != 2
  std::size_t components = 0;          // connected via shared vertices
};

MeshTopology mesh_topology(const TriangleMesh& mesh);

}  // namespace dockscope::oracle
