// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/isosurface.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <unordered_map>

#include "dockscope/error.hpp"

namespace dockscope {

namespace {

// Cube corners by bit pattern (x = bit 0, y = bit 1, z = bit 2). Each
// tetrahedron walks from corner 0 to corner 7 along one axis permutation.
constexpr std::array<std::array<int, 4>, 6> kTets{{
    {0, 1, 3, 7},
    {0, 1, 5, 7},
    {0, 2, 3, 7},
    {0, 2, 6, 7},
    {0, 4, 5, 7},
    {0, 4, 6, 7},
}};

// Clamp keeps vertices off grid points so no triangle collapses.
constexpr double kInterpEps = 1e-4;

class Extractor {
 public:
  Extractor(const DensityField& f, double iso) : f_(f), g_(f.grid), iso_(iso) {}

  TriangleMesh run() {
    const auto [nx, ny, nz] = g_.dims;
    for (int k = 0; k + 1 < nz; ++k)
      for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) cell(i, j, k);
    mesh_.iso = iso_;
    mesh_.channel = f_.channel;
    return std::move(mesh_);
  }

 private:
  void cell(int i, int j, int k) {
    std::array<std::size_t, 8> id{};
    std::array<double, 8> v{};
    int above = 0;
    for (int c = 0; c < 8; ++c) {
      id[c] = g_.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
      v[c] = f_.values[id[c]];
      if (v[c] > iso_) above |= 1 << c;
    }
    if (above == 0 || above == 0xff) return;
    for (const auto& t : kTets) {
      std::array<std::size_t, 4> tid{id[t[0]], id[t[1]], id[t[2]], id[t[3]]};
      std::array<double, 4> tv{v[t[0]], v[t[1]], v[t[2]], v[t[3]]};
      tet(tid, tv);
    }
  }

  void tet(const std::array<std::size_t, 4>& id, const std::array<double, 4>& v) {
    std::array<int, 4> in{}, out{};
    int ni = 0, no = 0;
    for (int c = 0; c < 4; ++c) {
      if (v[c] > iso_) in[ni++] = c;
      else out[no++] = c;
    }
    if (ni == 0 || no == 0) return;
    Vec3 cin = Vec3::Zero(), cout = Vec3::Zero();
    for (int a = 0; a < ni; ++a) cin += position(id[in[a]]);
    for (int a = 0; a < no; ++a) cout += position(id[out[a]]);
    const Vec3 outward = cout / no - cin / ni;

    auto e = [&](int a, int b) { return vertex(id[a], v[a], id[b], v[b]); };
    if (ni == 1) {
      emit(e(in[0], out[0]), e(in[0], out[1]), e(in[0], out[2]), outward);
    } else if (ni == 3) {
      emit(e(in[0], out[0]), e(in[1], out[0]), e(in[2], out[0]), outward);
    } else {
      const auto a = e(in[0], out[0]), b = e(in[0], out[1]), c = e(in[1], out[1]), d = e(in[1], out[0]);
      emit(a, b, c, outward);
      emit(a, c, d, outward);
    }
  }

  void emit(std::uint32_t a, std::uint32_t b, std::uint32_t c, const Vec3& outward) {
    const auto& p = mesh_.vertices;
    Vec3 n = (p[b] - p[a]).cross(p[c] - p[a]);
    if (n.dot(outward) < 0) std::swap(b, c);
    mesh_.triangles.push_back({a, b, c});
  }

  Vec3 position(std::size_t flat) const {
    const auto [i, j, k] = coords(flat);
    return g_.point(i, j, k);
  }

  std::array<int, 3> coords(std::size_t flat) const {
    const std::size_t nx = g_.dims[0], ny = g_.dims[1];
    return {static_cast<int>(flat % nx), static_cast<int>((flat / nx) % ny), static_cast<int>(flat / (nx * ny))};
  }

  Vec3 gradient(std::size_t flat) const {
    const auto c = coords(flat);
    Vec3 grad;
    for (int d = 0; d < 3; ++d) {
      auto lo = c, hi = c;
      lo[d] = std::max(0, c[d] - 1);
      hi[d] = std::min(g_.dims[d] - 1, c[d] + 1);
      const double span = (hi[d] - lo[d]) * g_.spacing;
      grad[d] = span > 0 ? (f_.at(hi[0], hi[1], hi[2]) - f_.at(lo[0], lo[1], lo[2])) / span : 0.0;
    }
    return grad;
  }

  std::uint32_t vertex(std::size_t a, double va, std::size_t b, double vb) {
    const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto [it, inserted] = edges_.try_emplace(key, 0u);
    if (!inserted) return it->second;
    double t = (iso_ - va) / (vb - va);
    t = std::clamp(t, kInterpEps, 1.0 - kInterpEps);
    mesh_.vertices.push_back(position(a) + t * (position(b) - position(a)));
    Vec3 n = -((1 - t) * gradient(a) + t * gradient(b));
    if (n.squaredNorm() > 0) n.normalize();
    mesh_.normals.push_back(n);
    it->second = static_cast<std::uint32_t>(mesh_.vertices.size() - 1);
    return it->second;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
      return std::hash<std::size_t>()(p.first * 0x9E3779B97F4A7C15ull ^ p.second);
    }
  };

  const DensityField& f_;
  const GridSpec& g_;
  double iso_;
  TriangleMesh mesh_;
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::uint32_t, PairHash> edges_;
};

void put_f32(std::string& out, double x) {
  float f = static_cast<float>(x);
  std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((bits >> s) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

}  // namespace

TriangleMesh extract_isosurface(const DensityField& field, double iso) {
  if (!(iso > 0)) fail(ErrorCode::invalid_argument, "iso level must be positive");
  if (field.values.size() != field.grid.size()) fail(ErrorCode::invalid_argument, "density grid size mismatch");
  return Extractor(field, iso).run();
}

std::string to_stl(const TriangleMesh& mesh, std::string_view header) {
  std::string out(80, '\0');
  std::memcpy(out.data(), header.data(), std::min<std::size_t>(header.size(), 80));
  put_u32(out, static_cast<std::uint32_t>(mesh.triangles.size()));
  out.reserve(out.size() + mesh.triangles.size() * 50);
  for (const auto& t : mesh.triangles) {
    const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
    Vec3 n = (b - a).cross(c - a);
    if (n.squaredNorm() > 0) n.normalize();
    for (const Vec3* p : {static_cast<const Vec3*>(&n), &a, &b, &c})
      for (int d = 0; d < 3; ++d) put_f32(out, (*p)[d]);
    out.push_back('\0');
    out.push_back('\0');
  }
  return out;
}

nlohmann::json to_json(const TriangleMesh& mesh) {
  nlohmann::json j;
  j["channel"] = mesh.channel ? nlohmann::json(*mesh.channel) : nlohmann::json(nullptr);
  j["iso"] = mesh.iso;
  auto flat = [](const std::vector<Vec3>& v) {
    std::vector<double> out;
    out.reserve(v.size() * 3);
    for (const auto& p : v) out.insert(out.end(), {p.x(), p.y(), p.z()});
    return out;
  };
  j["vertices"] = flat(mesh.vertices);
  j["normals"] = flat(mesh.normals);
  std::vector<std::uint32_t> tris;
  tris.reserve(mesh.triangles.size() * 3);
  for (const auto& t : mesh.triangles) tris.insert(tris.end(), t.begin(), t.end());
  j["triangles"] = std::move(tris);
  return j;
}

std::string to_dx(const DensityField& field, const std::vector<std::string>& comments) {
  const auto& g = field.grid;
  std::string out;
  char buf[160];
  for (const auto& c : comments) out += "# " + c + "\n";
  std::snprintf(buf, sizeof buf, "object 1 class gridpositions counts %d %d %d\n", g.dims[0], g.dims[1], g.dims[2]);
  out += buf;
  std::snprintf(buf, sizeof buf, "origin %.6f %.6f %.6f\n", g.origin.x(), g.origin.y(), g.origin.z());
  out += buf;
  std::snprintf(buf, sizeof buf, "delta %.6f 0 0\ndelta 0 %.6f 0\ndelta 0 0 %.6f\n", g.spacing, g.spacing, g.spacing);
  out += buf;
  std::snprintf(buf, sizeof buf, "object 2 class gridconnections counts %d %d %d\n", g.dims[0], g.dims[1], g.dims[2]);
  out += buf;
  std::snprintf(buf, sizeof buf, "object 3 class array type double rank 0 items %zu data follows\n", g.size());
  out += buf;
  // DX orders values with z varying fastest.
  std::size_t n = 0;
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int k = 0; k < g.dims[2]; ++k) {
        std::snprintf(buf, sizeof buf, "%.6e", field.at(i, j, k));
        out += buf;
        out += (++n % 3 == 0) ? '\n' : ' ';
      }
  if (n % 3 != 0) out += '\n';
  out += "attribute \"dep\" string \"positions\"\n";
  out += "object \"density\" class field\ncomponent \"positions\" value 1\ncomponent \"connections\" value 2\n"
         "component \"data\" value 3\n";
  return out;
}

}  // namespace dockscope
