// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>

#include <Eigen/Geometry>

#include "dockscope/amino_acids.hpp"
#include "dockscope/contacts.hpp"
#include "dockscope/error.hpp"

namespace dockscope {

namespace {

constexpr double kResidueSpacing = 3.8;
constexpr double kDockDistance = 4.0;  // between the two touching CA atoms
constexpr double kClearance = 2.0;
constexpr int kMaxAttempts = 2000;

constexpr std::array<const char*, 20> kResidueNames{"ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU",
                                                    "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE",
                                                    "PRO", "SER", "THR", "TRP", "TYR", "VAL"};

struct Slot {
  const char* name;
  char element;
  double t1, t2, radial;
};
constexpr std::array<Slot, 6> kSlots{{{"CA", 'C', 0, 0, 0},
                                      {"N", 'N', -1.2, 0.3, -0.2},
                                      {"C", 'C', 1.2, -0.3, -0.2},
                                      {"O", 'O', 1.0, 1.0, 0.3},
                                      {"CB", 'C', -0.4, -1.0, 1.0},
                                      {"CG", 'C', -0.3, -0.6, 2.1}}};

using Rng = std::mt19937_64;

// Residue layout of one protein in its own frame.
struct Shell {
  double radius = 0;
  std::vector<Vec3> directions;  // unit, one per residue
  std::vector<AtomSite> atoms;   // centered at the origin
};

Shell make_shell(std::size_t residues, std::size_t atoms_per_residue) {
  Shell s;
  s.radius = std::max(5.0, kResidueSpacing * std::sqrt(residues / (4 * std::numbers::pi)));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < residues; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / residues;
    const double r = std::sqrt(std::max(0.0, 1 - y * y));
    const Vec3 w(r * std::cos(golden * i), y, r * std::sin(golden * i));
    s.directions.push_back(w);
    Vec3 t1 = w.cross(std::abs(w.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX()).normalized();
    Vec3 t2 = w.cross(t1);
    for (std::size_t a = 0; a < atoms_per_residue; ++a) {
      const Slot& slot = kSlots[a];
      AtomSite site;
      site.position = s.radius * w + slot.t1 * t1 + slot.t2 * t2 + slot.radial * w;
      site.residue = static_cast<std::uint32_t>(i);
      std::copy_n(slot.name, std::char_traits<char>::length(slot.name), site.name.begin());
      site.element[0] = slot.element;
      s.atoms.push_back(site);
    }
  }
  return s;
}

Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

// Small rotation with a uniformly random axis and angle up to max_degrees.
Mat3 jitter_rotation(Rng& rng, double max_degrees) {
  std::normal_distribution<double> g;
  Vec3 axis(g(rng), g(rng), g(rng));
  std::uniform_real_distribution<double> u(0, max_degrees * std::numbers::pi / 180.0);
  return Eigen::AngleAxisd(u(rng), axis.normalized()).toRotationMatrix();
}

struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 center = Vec3::Zero();
};

// Pose of `p` docked onto `q` so that residue rp of p touches residue rq of q.
Pose dock(const Shell& shq, const Pose& q, std::size_t rq, const Shell& shp, std::size_t rp, double spin,
          const Mat3& tilt = Mat3::Identity()) {
  const Vec3 v = tilt * (q.rotation * shq.directions[rq]);
  Eigen::Quaterniond align = Eigen::Quaterniond::FromTwoVectors(shp.directions[rp], -v);
  Pose out;
  out.rotation = Eigen::AngleAxisd(spin, v).toRotationMatrix() * align.toRotationMatrix();
  out.center = q.center + v * (shq.radius + shp.radius + kDockDistance);
  return out;
}

bool clear_of(const std::vector<std::optional<Pose>>& poses, const std::vector<Shell>& shells, std::size_t p,
              std::size_t except) {
  for (std::size_t o = 0; o < poses.size(); ++o) {
    if (o == p || o == except || !poses[o]) continue;
    if ((poses[o]->center - poses[p]->center).norm() < shells[o].radius + shells[p].radius + kClearance)
      return false;
  }
  return true;
}

struct DockStep {
  std::size_t anchor, anchor_residue, residue;
  double spin;
};

struct Mode {
  Mat3 base = Mat3::Identity();
  std::vector<DockStep> steps;  // step i places protein i + 1
};

ProteinCoords place(const Shell& s, const Pose& pose, const Mat3& global_r, const Vec3& global_t) {
  ProteinCoords c;
  c.atoms = s.atoms;
  for (auto& a : c.atoms) a.position = global_r * (pose.rotation * a.position + pose.center) + global_t;
  return c;
}

std::vector<Residue> random_residues(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kResidueNames.size() - 1);
  std::vector<Residue> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Residue{static_cast<int>(i + 1), ' ', kResidueNames[pick(rng)]});
  return out;
}

// Tries to realize a mode (with jitter) as poses; nullopt on a clash.
std::optional<std::vector<std::optional<Pose>>> realize(const Mode& mode, const std::vector<Shell>& shells, Rng& rng,
                                                        double jitter) {
  std::vector<std::optional<Pose>> poses(shells.size());
  poses[0] = Pose{mode.base, Vec3::Zero()};
  std::uniform_real_distribution<double> spin_jitter(-jitter, jitter);
  for (std::size_t i = 0; i < mode.steps.size(); ++i) {
    const auto& st = mode.steps[i];
    const std::size_t p = i + 1;
    const Mat3 tilt = jitter > 0 ? jitter_rotation(rng, jitter) : Mat3::Identity();
    poses[p] = dock(shells[st.anchor], *poses[st.anchor], st.anchor_residue, shells[p], st.residue,
                    st.spin + spin_jitter(rng) * std::numbers::pi / 180.0, tilt);
    if (!clear_of(poses, shells, p, st.anchor)) return std::nullopt;
  }
  return poses;
}

std::string seq_name(const RawEnsemble& e, std::size_t protein, std::size_t residue) {
  const auto& r = e.proteins[protein].residues[residue];
  return e.proteins[protein].name + ":" + amino_acid(r.name)->code1 + std::to_string(r.seq);
}

std::string cc_id(std::size_t i, std::size_t total) {
  const int width = static_cast<int>(std::to_string(total).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "cc%0*zu", width, i + 1);
  return buf;
}

}  // namespace

RawEnsemble synthetic_ensemble(const SyntheticOptions& opt) {
  if (opt.proteins < 1 || opt.proteins > static_cast<std::size_t>(kMaxProteins))
    fail(ErrorCode::invalid_argument, "synthetic ensembles need 1.." + std::to_string(kMaxProteins) + " proteins");
  if (opt.residues < 4) fail(ErrorCode::invalid_argument, "synthetic proteins need at least 4 residues");
  if (opt.atoms_per_residue < 1 || opt.atoms_per_residue > kSlots.size())
    fail(ErrorCode::invalid_argument, "atoms per residue must be within 1..6");
  if (opt.configurations < 1) fail(ErrorCode::invalid_argument, "synthetic ensembles need a configuration");

  Rng rng(opt.seed);
  RawEnsemble e;
  std::vector<Shell> shells;
  for (std::size_t p = 0; p < opt.proteins; ++p) {
    // Slightly uneven sizes.
    std::uniform_int_distribution<std::size_t> size(opt.residues - opt.residues / 4, opt.residues);
    const std::size_t n = size(rng);
    shells.push_back(make_shell(n, opt.atoms_per_residue));
    e.proteins.push_back(ProteinInfo{"P" + std::to_string(p + 1), static_cast<char>('A' + p), static_cast<int>(p),
                                     random_residues(n, rng)});
  }
  e.property_names = {"score", "energy", "cluster"};

  std::vector<Mode> modes;
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  for (std::size_t m = 0; m < std::max<std::size_t>(1, opt.binding_modes); ++m) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) fail(ErrorCode::internal, "could not place synthetic proteins without clashes");
      Mode mode;
      mode.base = random_rotation(rng);
      for (std::size_t p = 1; p < opt.proteins; ++p) {
        std::uniform_int_distribution<std::size_t> anchor(0, p - 1);
        const std::size_t q = anchor(rng);
        std::uniform_int_distribution<std::size_t> rq(0, shells[q].directions.size() - 1),
            rp(0, shells[p].directions.size() - 1);
        mode.steps.push_back({q, rq(rng), rp(rng), angle(rng)});
      }
      if (realize(mode, shells, rng, 0)) {
        modes.push_back(std::move(mode));
        break;
      }
    }
  }

  std::uniform_int_distribution<std::size_t> pick_mode(0, modes.size() - 1);
  std::normal_distribution<double> noise(0, 1);
  std::uniform_real_distribution<double> offset(-50, 50);
  for (std::size_t i = 0; i < opt.configurations; ++i) {
    const std::size_t m = pick_mode(rng);
    std::optional<std::vector<std::optional<Pose>>> poses;
    for (int attempt = 0; !poses; ++attempt) {
      if (attempt == kMaxAttempts) fail(ErrorCode::internal, "could not jitter a synthetic binding mode");
      poses = realize(modes[m], shells, rng, attempt < kMaxAttempts / 2 ? opt.jitter_degrees : 0);
    }
    const Mat3 gr = random_rotation(rng);
    const Vec3 gt(offset(rng), offset(rng), offset(rng));
    Configuration cc;
    cc.id = cc_id(i, opt.configurations);
    for (std::size_t p = 0; p < opt.proteins; ++p) cc.proteins.push_back(place(shells[p], *(*poses)[p], gr, gt));
    const double score = -120.0 + 15.0 * static_cast<double>(m) + 8.0 * noise(rng);
    cc.properties = {score, -40.0 + 10.0 * noise(rng), static_cast<double>(m + 1)};
    e.configurations.push_back(std::move(cc));
  }
  return e;
}

CaseScenario case_scenario(std::size_t configurations, std::size_t with_aap, std::uint64_t seed) {
  if (with_aap < 1 || with_aap > configurations)
    fail(ErrorCode::invalid_argument, "case scenario needs 1 <= with_aap <= configurations");
  Rng rng(seed);
  constexpr std::size_t kResidues = 40;
  std::vector<Shell> shells;
  CaseScenario out;
  RawEnsemble& e = out.ensemble;
  const char* names[] = {"A", "B", "C"};
  for (std::size_t p = 0; p < 3; ++p) {
    shells.push_back(make_shell(kResidues, 5));
    e.proteins.push_back(ProteinInfo{names[p], static_cast<char>('A' + p), static_cast<int>(p),
                                     random_residues(kResidues, rng)});
  }
  const std::size_t a0 = 11, b0 = 29, c0 = 6;
  e.proteins[0].residues[a0].name = "ARG";
  e.proteins[1].residues[b0].name = "ASP";
  e.proteins[2].residues[c0].name = "LYS";
  out.aap_first = seq_name(e, 0, a0);
  out.aap_second = seq_name(e, 1, b0);
  out.residue = seq_name(e, 2, c0);
  e.property_names = {"score"};

  std::vector<std::size_t> order(configurations);
  for (std::size_t i = 0; i < configurations; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> has_aap(configurations, false);
  for (std::size_t i = 0; i < with_aap; ++i) has_aap[order[i]] = true;
  const std::size_t planted = order[0];

  auto angle_between = [](const Vec3& x, const Vec3& y) { return std::acos(std::clamp(x.dot(y), -1.0, 1.0)); };
  const double far = 70.0 * std::numbers::pi / 180.0;
  auto far_residue = [&](const Shell& s, std::span<const Vec3> avoid) {
    std::uniform_int_distribution<std::size_t> r(0, s.directions.size() - 1);
    for (;;) {
      std::size_t i = r(rng);
      bool ok = true;
      for (const auto& v : avoid) ok = ok && angle_between(s.directions[i], v) >= far;
      if (ok) return i;
    }
  };

  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> offset(-50, 50);
  std::normal_distribution<double> noise(0, 1);
  for (std::size_t i = 0; i < configurations; ++i) {
    Configuration cc;
    cc.id = cc_id(i, configurations);
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts) fail(ErrorCode::internal, "could not realize the case scenario");
      std::vector<std::optional<Pose>> poses(3);
      poses[0] = Pose{random_rotation(rng), Vec3::Zero()};
      const Vec3 wa0 = shells[0].directions[a0];
      std::size_t ra = has_aap[i] ? a0 : far_residue(shells[0], std::span(&wa0, 1));
      std::size_t rb = has_aap[i] ? b0 : std::uniform_int_distribution<std::size_t>(0, kResidues - 1)(rng);
      poses[1] = dock(shells[0], *poses[0], ra, shells[1], rb, angle(rng), jitter_rotation(rng, 3.0));
      const Vec3 avoid_a[] = {wa0, shells[0].directions[ra]};
      const std::size_t rc_a = far_residue(shells[0], avoid_a);
      const Vec3 wc0 = shells[2].directions[c0];
      const std::size_t rc = i == planted ? c0 : far_residue(shells[2], std::span(&wc0, 1));
      poses[2] = dock(shells[0], *poses[0], rc_a, shells[2], rc, angle(rng));
      if (!clear_of(poses, shells, 2, 0)) continue;

      const Mat3 gr = random_rotation(rng);
      const Vec3 gt(offset(rng), offset(rng), offset(rng));
      cc.proteins.clear();
      for (std::size_t p = 0; p < 3; ++p) cc.proteins.push_back(place(shells[p], *poses[p], gr, gt));

      // The planted facts must hold with some slack around the default cutoff
      // so that rounding in written files cannot flip them.
      bool ok = true;
      for (double cutoff : {4.8, 5.2}) {
        bool aap = false, res = false;
        for (const auto& pc : detect_contacts(cc, cutoff))
          for (const auto& c : pc.contacts) {
            if (pc.pair == ProteinPair{0, 1} && c.residue_first == a0 && c.residue_second == b0) aap = true;
            if (pc.pair.contains(2) && (pc.pair.first == 2 ? c.residue_first : c.residue_second) == c0) res = true;
          }
        ok = ok && aap == has_aap[i] && res == (i == planted);
      }
      if (ok) break;
    }
    cc.properties = {-100.0 + 10.0 * noise(rng)};
    if (has_aap[i]) out.aap_ccs.push_back(cc.id);
    if (i == planted) out.planted_cc = cc.id;
    e.configurations.push_back(std::move(cc));
  }
  return out;
}

ChainMapping mapping_of(const RawEnsemble& e) {
  ChainMapping m;
  for (const auto& p : e.proteins) m.add(p.chain, p.name);
  return m;
}

std::vector<Atom> configuration_atoms(const RawEnsemble& e, std::size_t cc) {
  std::vector<Atom> out;
  int serial = 0;
  const auto& conf = e.configurations.at(cc);
  for (std::size_t p = 0; p < conf.proteins.size(); ++p)
    for (const auto& site : conf.proteins[p].atoms) {
      const Residue& r = e.proteins[p].residues[site.residue];
      Atom a;
      a.serial = ++serial;
      a.name = site.atom_name();
      a.element = site.element_symbol();
      a.position = site.position;
      a.residue_seq = r.seq;
      a.insertion_code = r.icode;
      a.residue_name = r.name;
      a.chain_id = e.proteins[p].chain;
      out.push_back(std::move(a));
    }
  return out;
}

void write_ensemble_files(const RawEnsemble& e, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::io, "cannot write " + path.string());
    f << text;
    if (!f) fail(ErrorCode::io, "cannot write " + path.string());
  };
  for (std::size_t i = 0; i < e.configurations.size(); ++i) {
    Model model{1, configuration_atoms(e, i)};
    write(dir / (e.configurations[i].id + ".pdb"), write_structure(std::span(&model, 1)));
  }
  std::string mapping = "chain,protein\n";
  for (const auto& p : e.proteins) mapping += std::string(1, p.chain) + "," + p.name + "\n";
  write(dir / "mapping.csv", mapping);
  if (e.property_names.empty()) return;
  std::string props = "id";
  for (const auto& n : e.property_names) props += "," + n;
  props += "\n";
  char buf[64];
  for (const auto& cc : e.configurations) {
    props += cc.id;
    for (const auto& v : cc.properties) {
      if (v) std::snprintf(buf, sizeof buf, ",%.6g", *v);
      else std::snprintf(buf, sizeof buf, ",NA");
      props += buf;
    }
    props += "\n";
  }
  write(dir / "properties.csv", props);
}

}  // namespace dockscope
