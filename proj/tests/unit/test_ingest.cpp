// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dockscope/error.hpp"
#include "dockscope/ingest.hpp"
#include "dockscope/pdb.hpp"
#include "dockscope/synthetic.hpp"

namespace fs = std::filesystem;
using namespace dockscope;

namespace {

std::string atom_line(int serial, const char* name, const char* res, char chain, int seq, double x, double y, double z,
                      const char* element = "C", const char* record = "ATOM  ", char altloc = ' ') {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-6s%5d %-4s%c%3s %c%4d    %8.3f%8.3f%8.3f%6.2f%6.2f          %2s\n", record,
                serial, name, altloc, res, chain, seq, x, y, z, 1.0, 0.0, element);
  return buf;
}

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("dockscope_ingest_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int error_code_of(const std::function<void()>& f, ErrorCode expected) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
    return 1;
  }
  ADD_FAILURE() << "no error thrown";
  return 0;
}

}  // namespace

TEST(Pdb, ParsesModelsAndFixedColumns) {
  std::string text = "MODEL        1\n" + atom_line(1, "CA", "ARG", 'A', 12, 1.5, -2.25, 3.0) + "ENDMDL\n" +
                     "MODEL        2\n" + atom_line(1, "CA", "ARG", 'A', 12, 4.0, 5.0, 6.0) +
                     atom_line(2, "N", "ASP", 'B', 30, 0, 0, 0, "N") + "ENDMDL\n";
  auto models = parse_structure(text);
  ASSERT_EQ(models.size(), 2u);
  EXPECT_EQ(models[1].model_id, 2);
  ASSERT_EQ(models[1].atoms.size(), 2u);
  const Atom& a = models[0].atoms[0];
  EXPECT_EQ(a.name, "CA");
  EXPECT_EQ(a.residue_name, "ARG");
  EXPECT_EQ(a.chain_id, 'A');
  EXPECT_EQ(a.residue_seq, 12);
  EXPECT_DOUBLE_EQ(a.position.y(), -2.25);
  EXPECT_EQ(models[1].atoms[1].element, "N");
}

TEST(Pdb, SkipsHeteroHydrogenAndAltLocations) {
  std::string text = atom_line(1, "CA", "GLY", 'A', 1, 0, 0, 0, "C", "ATOM  ", 'A') +
                     atom_line(2, "CA", "GLY", 'A', 1, 9, 9, 9, "C", "ATOM  ", 'B') +
                     atom_line(3, "H", "GLY", 'A', 1, 1, 0, 0, "H") +
                     atom_line(4, "O", "HOH", 'W', 5, 3, 3, 3, "O", "HETATM");
  auto models = parse_structure(text);
  ASSERT_EQ(models.size(), 1u);
  ASSERT_EQ(models[0].atoms.size(), 1u);
  EXPECT_DOUBLE_EQ(models[0].atoms[0].position.x(), 0.0);

  auto all = parse_structure(text, ParseOptions{true, true});
  EXPECT_EQ(all[0].atoms.size(), 3u);
}

TEST(Pdb, MalformedCoordinateReportsLine) {
  std::string bad = atom_line(1, "CA", "GLY", 'A', 1, 0, 0, 0);
  bad.replace(30, 8, "   abc  ");
  std::string text = "REMARK x\n" + bad;
  try {
    parse_structure(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
}

TEST(Pdb, EmptyStructure) {
  error_code_of([] { parse_structure("REMARK nothing\nEND\n"); }, ErrorCode::empty_structure);
}

TEST(Pdb, WriteRoundTrip) {
  std::vector<Model> models(2);
  models[0].model_id = 1;
  models[1].model_id = 2;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 3; ++i) {
      Atom a;
      a.serial = i + 1;
      a.name = i == 0 ? "CA" : "CB";
      a.element = "C";
      a.residue_name = "LYS";
      a.residue_seq = 7 + i;
      a.chain_id = 'C';
      a.position = Vec3(1.234 * i, -5.5 + m, 100.125);
      models[m].atoms.push_back(a);
    }
  auto back = parse_structure(write_structure(models));
  ASSERT_EQ(back.size(), 2u);
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(back[m].atoms[i].residue_seq, 7 + i);
      EXPECT_NEAR((back[m].atoms[i].position - models[m].atoms[i].position).norm(), 0.0, 1e-3);
    }
}

TEST(Mapping, ParsesRowsAndHeader) {
  auto m = ChainMapping::parse("chain,protein\n# comment\nA,t1\n\nB,t2\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.find_chain('B')->protein, "t2");
  EXPECT_EQ(m.find_chain('B')->color, 1);
  EXPECT_EQ(m.find_chain('Z'), nullptr);
}

TEST(Mapping, RejectsDuplicateChain) {
  error_code_of([] { ChainMapping::parse("A,x\nA,y\n"); }, ErrorCode::invalid_argument);
}

TEST(Properties, ParsesAbsentValues) {
  auto t = PropertyTable::parse("id,score,energy\ncc1,-1.5,NA\ncc2,,3\n");
  ASSERT_EQ(t.names.size(), 2u);
  EXPECT_DOUBLE_EQ(*t.rows.at("cc1")[0], -1.5);
  EXPECT_FALSE(t.rows.at("cc1")[1].has_value());
  EXPECT_FALSE(t.rows.at("cc2")[0].has_value());
}

TEST(Properties, RejectsNonFinite) {
  error_code_of([] { PropertyTable::parse("id,score\ncc1,inf\n"); }, ErrorCode::parse);
}

TEST(Ingest, NaturalOrder) {
  EXPECT_TRUE(natural_less("cc2", "cc10"));
  EXPECT_FALSE(natural_less("cc10", "cc2"));
  EXPECT_TRUE(natural_less("a", "b"));
}

TEST(Ingest, LoadsWrittenSyntheticDirectory) {
  SyntheticOptions o;
  o.configurations = 6;
  o.proteins = 3;
  o.residues = 20;
  auto raw = synthetic_ensemble(o);
  auto dir = temp_dir("dir");
  write_ensemble_files(raw, dir);
  auto mapping = ChainMapping::parse(read_text_file(dir / "mapping.csv"));
  auto props = PropertyTable::parse(read_text_file(dir / "properties.csv"));
  auto loaded = load_ensemble(dir, mapping, &props);
  ASSERT_EQ(loaded.configurations.size(), 6u);
  ASSERT_EQ(loaded.proteins.size(), 3u);
  EXPECT_EQ(loaded.proteins[1].residues, raw.proteins[1].residues);
  EXPECT_EQ(loaded.configurations[0].id, raw.configurations[0].id);
  EXPECT_EQ(loaded.property_names, raw.property_names);
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& a = loaded.configurations[2].proteins[p].atoms;
    const auto& b = raw.configurations[2].proteins[p].atoms;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR((a[i].position - b[i].position).norm(), 0.0, 1e-3);
  }
}

TEST(Ingest, MultiModelFile) {
  SyntheticOptions o;
  o.configurations = 3;
  o.proteins = 2;
  o.residues = 10;
  auto raw = synthetic_ensemble(o);
  std::vector<Model> models;
  for (std::size_t c = 0; c < 3; ++c) models.push_back({static_cast<int>(c + 1), configuration_atoms(raw, c)});
  auto dir = temp_dir("multi");
  write(dir / "all.pdb", write_structure(models));
  auto loaded = load_ensemble(dir / "all.pdb", mapping_of(raw));
  ASSERT_EQ(loaded.configurations.size(), 3u);
  EXPECT_EQ(loaded.configurations[0].id, "1");
}

TEST(Ingest, MissingChainIsInconsistency) {
  auto dir = temp_dir("missing");
  write(dir / "c1.pdb", atom_line(1, "CA", "GLY", 'A', 1, 0, 0, 0) + atom_line(2, "CA", "GLY", 'B', 1, 5, 0, 0));
  write(dir / "c2.pdb", atom_line(1, "CA", "GLY", 'A', 1, 0, 0, 0));
  auto mapping = ChainMapping::parse("A,x\nB,y\n");
  try {
    load_ensemble(dir, mapping);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inconsistency);
    std::string all = std::string(e.what()) + e.detail();
    EXPECT_NE(all.find("c2"), std::string::npos) << all;
    EXPECT_NE(all.find("B"), std::string::npos) << all;
  }
}

TEST(Ingest, ResidueMismatchIsIntegrity) {
  auto dir = temp_dir("mismatch");
  write(dir / "c1.pdb", atom_line(1, "CA", "GLY", 'A', 1, 0, 0, 0) + atom_line(2, "CA", "GLY", 'B', 1, 5, 0, 0));
  write(dir / "c2.pdb", atom_line(1, "CA", "ALA", 'A', 1, 0, 0, 0) + atom_line(2, "CA", "GLY", 'B', 1, 5, 0, 0));
  error_code_of([&] { load_ensemble(dir, ChainMapping::parse("A,x\nB,y\n")); }, ErrorCode::integrity);
}

TEST(Ingest, UnknownPropertyRowWarns) {
  auto dir = temp_dir("props");
  write(dir / "c1.pdb", atom_line(1, "CA", "GLY", 'A', 1, 0, 0, 0) + atom_line(2, "CA", "GLY", 'B', 1, 5, 0, 0));
  auto props = PropertyTable::parse("id,score\nc1,1\nghost,2\n");
  auto loaded = load_ensemble(dir, ChainMapping::parse("A,x\nB,y\n"), &props);
  ASSERT_EQ(loaded.configurations.size(), 1u);
  EXPECT_DOUBLE_EQ(*loaded.configurations[0].properties[0], 1.0);
  ASSERT_FALSE(loaded.warnings.empty());
  EXPECT_NE(loaded.warnings[0].find("ghost"), std::string::npos);
}
