// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/superpose.hpp"

#include <cmath>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dockscope/error.hpp"

namespace dockscope {

Superposition kabsch_superpose(std::span<const Vec3> moving, std::span<const Vec3> target) {
  if (moving.size() != target.size())
    fail(ErrorCode::invalid_argument, "superposition needs equally sized point sets");
  const std::size_t n = moving.size();
  if (n < 3) fail(ErrorCode::degenerate_geometry, "superposition needs at least 3 points");

  Vec3 cm = Vec3::Zero(), ct = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    cm += moving[i];
    ct += target[i];
  }
  cm /= static_cast<double>(n);
  ct /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();     // cross-covariance
  Mat3 spread = Mat3::Zero();  // moving scatter, for the collinearity check
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 a = moving[i] - cm;
    cov += a * (target[i] - ct).transpose();
    spread += a * a.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(spread);
  const Vec3 ev = eig.eigenvalues();  // ascending
  if (ev[2] <= 0 || ev[1] <= 1e-12 * ev[2])
    fail(ErrorCode::degenerate_geometry, "superposition points are coincident or collinear");

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0 ? -1.0 : 1.0;

  Superposition out;
  out.transform.rotation = v * d * u.transpose();
  out.transform.translation = ct - out.transform.rotation * cm;
  out.rmsd = rmsd_after(moving, target, out.transform);
  return out;
}

double rmsd_after(std::span<const Vec3> moving, std::span<const Vec3> target, const RigidTransform& t) {
  if (moving.empty()) return 0;
  double sum = 0;
  for (std::size_t i = 0; i < moving.size(); ++i) sum += (t.apply(moving[i]) - target[i]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(moving.size()));
}

std::pair<std::vector<Vec3>, std::vector<Vec3>> matched_positions(const ProteinCoords& moving,
                                                                  const ProteinCoords& target) {
  std::pair<std::vector<Vec3>, std::vector<Vec3>> out;
  bool same_layout = moving.atoms.size() == target.atoms.size();
  for (std::size_t i = 0; same_layout && i < moving.atoms.size(); ++i)
    same_layout = moving.atoms[i].residue == target.atoms[i].residue && moving.atoms[i].name == target.atoms[i].name;
  if (same_layout) {
    for (std::size_t i = 0; i < moving.atoms.size(); ++i) {
      out.first.push_back(moving.atoms[i].position);
      out.second.push_back(target.atoms[i].position);
    }
    return out;
  }
  std::map<std::pair<std::uint32_t, std::string>, Vec3> by_name;
  for (const auto& a : target.atoms) by_name.emplace(std::make_pair(a.residue, std::string(a.atom_name())), a.position);
  for (const auto& a : moving.atoms) {
    auto it = by_name.find({a.residue, std::string(a.atom_name())});
    if (it == by_name.end()) continue;
    out.first.push_back(a.position);
    out.second.push_back(it->second);
  }
  return out;
}

}  // namespace dockscope
