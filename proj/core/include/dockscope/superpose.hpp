// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dockscope/geometry.hpp"
#include "dockscope/ingest.hpp"

namespace dockscope {

/// Proper rigid motion x -> R x + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
  RigidTransform inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }
  /// (*this) after `first`.
  RigidTransform compose(const RigidTransform& first) const {
    return {rotation * first.rotation, rotation * first.translation + translation};
  }
};

struct Superposition {
  RigidTransform transform;  // maps moving onto target
  double rmsd = 0;
};

/// Least-squares optimal rotation and translation mapping `moving` onto
/// `target` (equal length, same correspondence), reflections excluded.
/// Throws Error(degenerate_geometry) for fewer than 3 points or collinear input.
Superposition kabsch_superpose(std::span<const Vec3> moving, std::span<const Vec3> target);

double rmsd_after(std::span<const Vec3> moving, std::span<const Vec3> target, const RigidTransform& t);

/// Coordinates of atoms present in both copies of a protein, paired by
/// (residue, atom name). Identical atom lists pair positionally.
std::pair<std::vector<Vec3>, std::vector<Vec3>> matched_positions(const ProteinCoords& moving,
                                                                  const ProteinCoords& target);

}  // namespace dockscope
