// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dockscope/cc_set.hpp"
#include "dockscope/contacts.hpp"
#include "dockscope/geometry.hpp"
#include "dockscope/hierarchy.hpp"

namespace dockscope {

/// Kernel evaluation stops where exp(-r^2 / 2 sigma^2) drops below ~7e-10.
inline constexpr double kDefaultTruncationSigmas = 6.5;
/// Grid margin around the contributing atoms, in units of the largest sigma.
inline constexpr double kGridMarginSigmas = 3.0;
inline constexpr double kDefaultIsoFraction = 0.10;

/// Regular grid; point (i, j, k) sits at origin + spacing * (i, j, k).
struct GridSpec {
  Vec3 origin = Vec3::Zero();
  double spacing = 1.0;
  std::array<int, 3> dims{1, 1, 1};

  std::size_t size() const { return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]; }
  /// x varies fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i;
  }
  Vec3 point(int i, int j, int k) const { return origin + spacing * Vec3(i, j, k); }
};

struct DensityField {
  GridSpec grid;
  std::vector<double> values;  // GridSpec::index layout
  std::optional<ProteinIndex> channel;

  double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
  double max_value() const;
};

struct KernelAtom {
  Vec3 center;
  double sigma;
};

/// Sum of unnormalized Gaussians (peak 1 per atom) sampled on `grid`, each
/// kernel cut off beyond `truncation_sigmas` * sigma.
DensityField evaluate_density(std::span<const KernelAtom> atoms, const GridSpec& grid,
                              double truncation_sigmas = kDefaultTruncationSigmas);

/// Smallest grid with the given spacing covering every atom plus
/// `margin_sigmas` times the largest sigma.
GridSpec grid_around(std::span<const KernelAtom> atoms, double spacing,
                     double margin_sigmas = kGridMarginSigmas);

struct DensityParams {
  double spacing = 1.0;
  double sigma_scale = 1.0;  // sigma = van der Waals radius * sigma_scale
  double truncation_sigmas = kDefaultTruncationSigmas;
  std::optional<CcIndex> reference_cc;  // default: lowest visible
  std::size_t max_grid_points = std::size_t{256} * 256 * 256;
};

struct DensityResult {
  ProteinIndex primary = 0;
  CcIndex reference_cc = 0;
  /// One field per partner protein, all on the same grid.
  std::vector<DensityField> channels;
};

/// Superposes every visible configuration onto the primary protein of the
/// reference configuration and accumulates one density channel per protein
/// that shares a PPE with the primary.
DensityResult compute_density(const ComplexEnsemble& ensemble, ProteinIndex primary, const CcSet& visible,
                              const DensityParams& params = {});

}  // namespace dockscope
