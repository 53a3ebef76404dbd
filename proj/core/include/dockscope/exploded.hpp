// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dockscope/geometry.hpp"
#include "dockscope/ingest.hpp"
#include "dockscope/superpose.hpp"

namespace dockscope {

inline constexpr double kDefaultExplodeGap = 10.0;
inline constexpr int kDefaultExplodeIterations = 500;
/// Displacements are kept inside this cone around each protein's ray.
inline constexpr double kExplodeConeDegrees = 10.0;

struct ExplodedLayout {
  std::vector<RigidTransform> transforms;  // translation only, one per protein
  double gap = kDefaultExplodeGap;
  int iterations = 0;
  bool converged = false;
  double min_distance = 0;  // smallest inter-protein distance after layout, capped at gap
  std::optional<std::string> warning;
};

/// Translates proteins apart along their rays from the complex centroid until
/// every pair is at least `gap` apart. Absent or empty proteins stay put.
ExplodedLayout exploded_layout(std::span<const ProteinCoords> proteins, double gap = kDefaultExplodeGap,
                               int max_iters = kDefaultExplodeIterations);

/// Smallest atom distance between two proteins under translations, or
/// `limit` if none is closer.
double min_distance(const ProteinCoords& a, const Vec3& shift_a, const ProteinCoords& b, const Vec3& shift_b,
                    double limit);

}  // namespace dockscope
