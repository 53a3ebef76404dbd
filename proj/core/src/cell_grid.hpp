// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dockscope/ingest.hpp"

namespace dockscope::detail {

// Uniform cell list over one protein's atoms. Queries find every atom within
// `radius` <= cell edge of a point.
class CellGrid {
 public:
  CellGrid(std::span<const AtomSite> atoms, double cell) : atoms_(atoms), cell_(cell) {
    lo_ = atoms.front().position;
    Vec3 hi = lo_;
    for (const auto& a : atoms) {
      lo_ = lo_.cwiseMin(a.position);
      hi = hi.cwiseMax(a.position);
    }
    for (int d = 0; d < 3; ++d)
      dims_[d] = std::max(1, static_cast<int>(std::floor((hi[d] - lo_[d]) / cell_)) + 1);
    const std::size_t ncell = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    start_.assign(ncell + 1, 0);
    std::vector<std::uint32_t> cell_of(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      cell_of[i] = static_cast<std::uint32_t>(flat(cell_coord(atoms[i].position)));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
    order_.resize(atoms.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < atoms.size(); ++i) order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }

  // Calls f(atom, squared distance) for atoms with squared distance <= radius2.
  template <typename F>
  void for_each_near(const Vec3& p, double radius2, F&& f) const {
    std::array<int, 3> c{};
    for (int d = 0; d < 3; ++d) {
      double rel = (p[d] - lo_[d]) / cell_;
      if (rel < -1.0 || rel >= dims_[d] + 1.0) return;
      c[d] = static_cast<int>(std::floor(rel));
    }
    for (int x = std::max(0, c[0] - 1); x <= std::min(dims_[0] - 1, c[0] + 1); ++x)
      for (int y = std::max(0, c[1] - 1); y <= std::min(dims_[1] - 1, c[1] + 1); ++y)
        for (int z = std::max(0, c[2] - 1); z <= std::min(dims_[2] - 1, c[2] + 1); ++z) {
          std::size_t cell = flat({x, y, z});
          for (std::uint32_t k = start_[cell]; k < start_[cell + 1]; ++k) {
            const auto& atom = atoms_[order_[k]];
            double d2 = (atom.position - p).squaredNorm();
            if (d2 <= radius2) f(atom, d2);
          }
        }
  }

 private:
  std::array<int, 3> cell_coord(const Vec3& p) const {
    std::array<int, 3> c{};
    for (int d = 0; d < 3; ++d)
      c[d] = std::clamp(static_cast<int>(std::floor((p[d] - lo_[d]) / cell_)), 0, dims_[d] - 1);
    return c;
  }
  std::size_t flat(std::array<int, 3> c) const {
    return (static_cast<std::size_t>(c[0]) * dims_[1] + c[1]) * dims_[2] + c[2];
  }

  std::span<const AtomSite> atoms_;
  double cell_;
  Vec3 lo_;
  std::array<int, 3> dims_{};
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> order_;
};

}  // namespace dockscope::detail
