// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dockscope/density.hpp"

namespace dockscope {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;  // unit, per vertex, pointing to lower density
  std::vector<std::array<std::uint32_t, 3>> triangles;  // counter-clockwise seen from outside
  std::optional<ProteinIndex> channel;
  double iso = 0;
};

/// Iso-surface {x : f(x) = iso} of the piecewise-linear
/// interpolant over a Freudenthal split of every grid cell into six
/// tetrahedra. Vertices are shared between neighbouring cells, so a region
/// above `iso` that does not touch the grid boundary yields a closed mesh.
TriangleMesh extract_isosurface(const DensityField& field, double iso);

/// Binary STL (80-byte header, little-endian).
std::string to_stl(const TriangleMesh& mesh, std::string_view header = "dockscope isosurface");

/// {"channel", "iso", "vertices": [x,y,z,...], "normals": [...], "triangles": [a,b,c,...]}
nlohmann::json to_json(const TriangleMesh& mesh);

/// OpenDX scalar field. `comments` become leading '#' lines.
std::string to_dx(const DensityField& field, const std::vector<std::string>& comments = {});

}  // namespace dockscope
