// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dockscope/amino_acids.hpp"
#include "dockscope/error.hpp"
#include "dockscope/parallel.hpp"
#include "dockscope/superpose.hpp"

namespace dockscope {

double DensityField::max_value() const {
  double m = 0;
  for (double v : values) m = std::max(m, v);
  return m;
}

DensityField evaluate_density(std::span<const KernelAtom> atoms, const GridSpec& grid, double truncation_sigmas) {
  if (!(grid.spacing > 0)) fail(ErrorCode::invalid_argument, "grid spacing must be positive");
  if (!(truncation_sigmas > 0)) fail(ErrorCode::invalid_argument, "kernel truncation must be positive");
  DensityField field;
  field.grid = grid;
  field.values.assign(grid.size(), 0.0);
  if (atoms.empty()) return field;

  const auto [nx, ny, nz] = grid.dims;
  // z slabs are independent; each slab visits every atom overlapping it.
  const std::size_t slabs = std::min<std::size_t>(nz, std::max<std::size_t>(1, thread_count() * 4));
  parallel_for(0, slabs, [&](std::size_t s) {
    const int z0 = static_cast<int>(s * nz / slabs);
    const int z1 = static_cast<int>((s + 1) * nz / slabs);
    std::vector<double> ex, ey, ez;
    for (const auto& atom : atoms) {
      const double rc = truncation_sigmas * atom.sigma;
      const double inv = 1.0 / (2.0 * atom.sigma * atom.sigma);
      const Vec3 rel = (atom.center - grid.origin) / grid.spacing;
      const double rcg = rc / grid.spacing;
      std::array<int, 3> lo{}, hi{};
      for (int d = 0; d < 3; ++d) {
        lo[d] = std::max(0, static_cast<int>(std::ceil(rel[d] - rcg)));
        hi[d] = std::min(grid.dims[d] - 1, static_cast<int>(std::floor(rel[d] + rcg)));
      }
      lo[2] = std::max(lo[2], z0);
      hi[2] = std::min(hi[2], z1 - 1);
      if (lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2]) continue;

      auto axis = [&](int d, std::vector<double>& e, std::vector<double>& d2) {
        e.resize(hi[d] - lo[d] + 1);
        d2.resize(e.size());
        for (int i = lo[d]; i <= hi[d]; ++i) {
          double delta = grid.origin[d] + grid.spacing * i - atom.center[d];
          d2[i - lo[d]] = delta * delta;
          e[i - lo[d]] = std::exp(-delta * delta * inv);
        }
      };
      std::vector<double> dx, dy, dz;
      axis(0, ex, dx);
      axis(1, ey, dy);
      axis(2, ez, dz);
      const double rc2 = rc * rc;
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const double zz = dz[k - lo[2]];
        for (int j = lo[1]; j <= hi[1]; ++j) {
          const double yz = zz + dy[j - lo[1]];
          if (yz > rc2) continue;
          const double wyz = ez[k - lo[2]] * ey[j - lo[1]];
          double* row = &field.values[grid.index(0, j, k)];
          for (int i = lo[0]; i <= hi[0]; ++i)
            if (yz + dx[i - lo[0]] <= rc2) row[i] += wyz * ex[i - lo[0]];
        }
      }
    }
  });
  return field;
}

GridSpec grid_around(std::span<const KernelAtom> atoms, double spacing, double margin_sigmas) {
  if (!(spacing > 0)) fail(ErrorCode::invalid_argument, "grid spacing must be positive");
  GridSpec grid;
  grid.spacing = spacing;
  if (atoms.empty()) return grid;
  Vec3 lo = atoms.front().center, hi = lo;
  double smax = 0;
  for (const auto& a : atoms) {
    lo = lo.cwiseMin(a.center);
    hi = hi.cwiseMax(a.center);
    smax = std::max(smax, a.sigma);
  }
  const double margin = margin_sigmas * smax;
  grid.origin = lo - Vec3::Constant(margin);
  for (int d = 0; d < 3; ++d)
    grid.dims[d] = static_cast<int>(std::ceil((hi[d] - lo[d] + 2 * margin) / spacing)) + 1;
  return grid;
}

DensityResult compute_density(const ComplexEnsemble& ens, ProteinIndex primary, const CcSet& visible,
                              const DensityParams& params) {
  if (primary >= ens.proteins().size()) fail(ErrorCode::not_found, "primary protein out of range");
  if (visible.size() != ens.cc_count() || visible.none())
    fail(ErrorCode::invalid_argument, "density needs a nonempty visible set");
  if (!(params.spacing > 0)) fail(ErrorCode::invalid_argument, "grid spacing must be positive");
  if (!(params.sigma_scale > 0)) fail(ErrorCode::invalid_argument, "sigma scale must be positive");

  DensityResult out;
  out.primary = primary;
  out.reference_cc = params.reference_cc.value_or(static_cast<CcIndex>(visible.find_first()));
  if (out.reference_cc >= ens.cc_count()) fail(ErrorCode::not_found, "reference configuration out of range");

  std::vector<ProteinIndex> partners;
  for (const auto& ppe : ens.ppes())
    if (ppe.pair.contains(primary)) partners.push_back(ppe.pair.other(primary));
  std::sort(partners.begin(), partners.end());

  const auto& configs = ens.configurations();
  const ProteinCoords& target = configs[out.reference_cc].proteins[primary];
  const auto ccs = to_indices(visible);
  std::vector<RigidTransform> transforms(ccs.size());
  parallel_for(0, ccs.size(), [&](std::size_t i) {
    if (ccs[i] == out.reference_cc) return;
    auto [moving, fixed] = matched_positions(configs[ccs[i]].proteins[primary], target);
    transforms[i] = kabsch_superpose(moving, fixed).transform;
  });

  std::vector<std::vector<KernelAtom>> atoms(partners.size());
  for (std::size_t c = 0; c < partners.size(); ++c)
    for (std::size_t i = 0; i < ccs.size(); ++i)
      for (const auto& a : configs[ccs[i]].proteins[partners[c]].atoms)
        atoms[c].push_back({transforms[i].apply(a.position),
                            van_der_waals_radius(a.element_symbol()) * params.sigma_scale});

  std::vector<KernelAtom> all;
  for (const auto& v : atoms) all.insert(all.end(), v.begin(), v.end());
  GridSpec grid = grid_around(all, params.spacing);
  if (grid.size() > params.max_grid_points)
    fail(ErrorCode::invalid_argument, "density grid too large; increase the spacing",
         std::to_string(grid.dims[0]) + "x" + std::to_string(grid.dims[1]) + "x" + std::to_string(grid.dims[2]));

  for (std::size_t c = 0; c < partners.size(); ++c) {
    out.channels.push_back(evaluate_density(atoms[c], grid, params.truncation_sigmas));
    out.channels.back().channel = partners[c];
  }
  return out;
}

}  // namespace dockscope
