// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/exploded.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "cell_grid.hpp"
#include "dockscope/error.hpp"

namespace dockscope {

namespace {

constexpr double kRepulsionGain = 0.5;
constexpr double kOutwardGain = 0.25;
constexpr double kRestoringGain = 0.2;
constexpr double kOvershoot = 0.05;  // fraction of gap added to each deficit

struct Body {
  Vec3 centroid = Vec3::Zero();
  double radius = 0;
  std::optional<Vec3> ray;  // unit; none for anchored bodies
  std::optional<detail::CellGrid> grid;
};

double grid_min_distance(const ProteinCoords& a, const Vec3& shift_a, const detail::CellGrid& grid_b,
                         const Vec3& shift_b, double limit) {
  double best2 = limit * limit;
  const Vec3 delta = shift_a - shift_b;
  for (const auto& atom : a.atoms)
    grid_b.for_each_near(atom.position + delta, best2, [&](const AtomSite&, double d2) { best2 = std::min(best2, d2); });
  return std::sqrt(best2);
}

}  // namespace

double min_distance(const ProteinCoords& a, const Vec3& shift_a, const ProteinCoords& b, const Vec3& shift_b,
                    double limit) {
  if (a.atoms.empty() || b.atoms.empty()) return limit;
  detail::CellGrid grid(b.atoms, limit);
  return grid_min_distance(a, shift_a, grid, shift_b, limit);
}

ExplodedLayout exploded_layout(std::span<const ProteinCoords> proteins, double gap, int max_iters) {
  if (!(gap > 0)) fail(ErrorCode::invalid_argument, "explode gap must be positive");
  if (max_iters < 0) fail(ErrorCode::invalid_argument, "max_iters must be nonnegative");

  const std::size_t n = proteins.size();
  ExplodedLayout out;
  out.gap = gap;
  out.transforms.resize(n);

  std::vector<Body> bodies(n);
  std::vector<std::size_t> present;
  Vec3 center = Vec3::Zero();
  std::size_t total_atoms = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (proteins[p].atoms.empty()) continue;
    present.push_back(p);
    auto& b = bodies[p];
    for (const auto& a : proteins[p].atoms) b.centroid += a.position;
    center += b.centroid;
    total_atoms += proteins[p].atoms.size();
    b.centroid /= static_cast<double>(proteins[p].atoms.size());
    for (const auto& a : proteins[p].atoms) b.radius = std::max(b.radius, (a.position - b.centroid).norm());
    b.grid.emplace(proteins[p].atoms, gap);
  }
  if (present.size() < 2) {
    out.converged = true;
    out.min_distance = gap;
    return out;
  }
  center /= static_cast<double>(total_atoms);
  for (std::size_t p : present) {
    Vec3 off = bodies[p].centroid - center;
    if (off.norm() > 1e-9) bodies[p].ray = off.normalized();
  }

  const double cone = std::tan(kExplodeConeDegrees * std::numbers::pi / 180.0);
  std::vector<Vec3> t(n, Vec3::Zero());

  // Returns the violating pairs with their distances.
  struct Violation {
    std::size_t a, b;
    double d;
  };
  auto violations = [&] {
    std::vector<Violation> v;
    for (std::size_t x = 0; x < present.size(); ++x)
      for (std::size_t y = x + 1; y < present.size(); ++y) {
        const std::size_t a = present[x], b = present[y];
        const double centers = (bodies[a].centroid + t[a] - bodies[b].centroid - t[b]).norm();
        if (centers - bodies[a].radius - bodies[b].radius >= gap) continue;
        const double d = grid_min_distance(proteins[a], t[a], *bodies[b].grid, t[b], gap);
        if (d < gap) v.push_back({a, b, d});
      }
    return v;
  };

  auto current = violations();
  int iter = 0;
  while (!current.empty() && iter < max_iters) {
    ++iter;
    std::vector<Vec3> force(n, Vec3::Zero());
    std::vector<double> push(n, 0.0);
    for (const auto& v : current) {
      Vec3 dir = bodies[v.a].centroid + t[v.a] - bodies[v.b].centroid - t[v.b];
      if (dir.norm() < 1e-9) {
        const Vec3 ra = bodies[v.a].ray.value_or(Vec3::Zero()), rb = bodies[v.b].ray.value_or(Vec3::Zero());
        dir = ra - rb;
        if (dir.norm() < 1e-9) dir = Vec3::UnitX();
      }
      dir.normalize();
      const double deficit = gap - v.d + kOvershoot * gap;
      force[v.a] += kRepulsionGain * deficit * dir;
      force[v.b] -= kRepulsionGain * deficit * dir;
      push[v.a] += deficit;
      push[v.b] += deficit;
    }
    for (std::size_t p : present) {
      const auto& ray = bodies[p].ray;
      if (!ray) continue;  // anchored at the complex centroid
      Vec3 f = force[p] + kOutwardGain * push[p] * *ray;
      const Vec3 perp = t[p] - t[p].dot(*ray) * *ray;
      f -= kRestoringGain * perp;
      Vec3 next = t[p] + f;
      const double radial = std::max(0.0, next.dot(*ray));
      Vec3 side = next - next.dot(*ray) * *ray;
      const double limit = cone * radial;
      if (side.norm() > limit) side *= side.norm() > 0 ? limit / side.norm() : 0.0;
      t[p] = radial * *ray + side;
    }
    current = violations();
  }

  out.iterations = iter;
  out.converged = current.empty();
  out.min_distance = gap;
  for (const auto& v : current) out.min_distance = std::min(out.min_distance, v.d);
  if (!out.converged)
    out.warning = "exploded layout did not reach the " + std::to_string(gap) + " A gap within " +
                  std::to_string(max_iters) + " iterations";
  for (std::size_t p = 0; p < n; ++p) out.transforms[p].translation = t[p];
  return out;
}

}  // namespace dockscope
