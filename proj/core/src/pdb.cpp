// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/pdb.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "dockscope/amino_acids.hpp"
#include "dockscope/error.hpp"

namespace dockscope {

namespace {

std::string_view field(std::string_view line, std::size_t start, std::size_t len) {
  if (start >= line.size()) return {};
  return line.substr(start, len);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + what,
       "line=" + std::to_string(line_no));
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string infer_element(std::string_view raw_name, bool hetero) {
  // Columns 13-14 hold the element for well-formed names; a blank or digit
  // in column 13 means a one-letter element in column 14.
  if (raw_name.size() < 2) return upper(trim(raw_name)).substr(0, 1);
  char c0 = raw_name[0], c1 = raw_name[1];
  if (c0 == ' ' || std::isdigit(static_cast<unsigned char>(c0))) return upper(std::string_view(&c1, 1));
  if (!hetero && (c0 == 'H' || c0 == 'D')) return "H";
  std::string two = upper(raw_name.substr(0, 2));
  if (!std::isalpha(static_cast<unsigned char>(two[1]))) two.resize(1);
  return two;
}

}  // namespace

bool Atom::standard_residue() const { return is_standard_amino_acid(residue_name); }

std::vector<Model> parse_structure(std::string_view text, const ParseOptions& options) {
  std::vector<Model> models;
  std::size_t coordinate_records = 0;
  // First alternate location seen for each (model, chain, residue, icode, name).
  std::map<std::tuple<char, int, char, std::string>, char> altloc_seen;

  auto current = [&]() -> Model& {
    if (models.empty()) models.push_back(Model{1, {}});
    return models.back();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    std::string_view record = trim(field(line, 0, 6));
    if (record == "MODEL") {
      int id = static_cast<int>(models.size()) + 1;
      std::string_view rest = trim(line.substr(std::min<std::size_t>(6, line.size())));
      if (!rest.empty() && !parse_number(rest, id))
        parse_fail(line_no, "malformed MODEL serial");
      models.push_back(Model{id, {}});
      altloc_seen.clear();
      continue;
    }
    if (record == "ENDMDL") continue;
    const bool hetero = record == "HETATM";
    if (record != "ATOM" && !hetero) continue;
    ++coordinate_records;

    if (line.size() < 54) parse_fail(line_no, "truncated coordinate record");
    Atom atom;
    atom.hetero = hetero;
    if (!parse_number(field(line, 6, 5), atom.serial)) atom.serial = 0;  // hybrid-36 serials
    std::string_view raw_name = field(line, 12, 4);
    atom.name = std::string(trim(raw_name));
    char altloc = line[16];
    atom.residue_name = upper(trim(field(line, 17, 3)));
    atom.chain_id = line[21];
    if (!parse_number(field(line, 22, 4), atom.residue_seq))
      parse_fail(line_no, "malformed residue sequence number");
    atom.insertion_code = line[26];
    if (!parse_number(field(line, 30, 8), atom.position.x()))
      parse_fail(line_no, "malformed x coordinate");
    if (!parse_number(field(line, 38, 8), atom.position.y()))
      parse_fail(line_no, "malformed y coordinate");
    if (!parse_number(field(line, 46, 8), atom.position.z()))
      parse_fail(line_no, "malformed z coordinate");
    if (!atom.position.allFinite()) parse_fail(line_no, "non-finite coordinate");

    std::string_view element = trim(field(line, 76, 2));
    atom.element = element.empty() ? infer_element(raw_name, hetero) : upper(element);
    if (atom.element.empty()) parse_fail(line_no, "cannot determine element");

    if (hetero && !options.include_hetatm) continue;
    if (atom.hydrogen() && !options.include_hydrogens) continue;
    if (altloc != ' ') {
      auto key = std::make_tuple(atom.chain_id, atom.residue_seq, atom.insertion_code, atom.name);
      auto [it, inserted] = altloc_seen.emplace(key, altloc);
      if (!inserted && it->second != altloc) continue;
    }
    current().atoms.push_back(std::move(atom));
  }

  if (coordinate_records == 0) fail(ErrorCode::empty_structure, "no ATOM/HETATM records");
  std::size_t kept = 0;
  for (const auto& m : models) kept += m.atoms.size();
  if (kept == 0) fail(ErrorCode::empty_structure, "no atoms left after filtering");
  return models;
}

std::string write_structure(std::span<const Model> models) {
  std::string out;
  char buf[128];
  const bool wrap = models.size() > 1;
  for (const auto& model : models) {
    if (wrap) {
      std::snprintf(buf, sizeof buf, "MODEL     %4d\n", model.model_id);
      out += buf;
    }
    for (const auto& a : model.atoms) {
      // Names of one-letter elements start in column 14 unless they fill all four columns.
      std::string name = a.name;
      if (a.element.size() == 1 && name.size() < 4) name = " " + name;
      std::snprintf(buf, sizeof buf,
                    "%-6s%5d %-4.4s %3.3s %c%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f          %2.2s\n",
                    a.hetero ? "HETATM" : "ATOM", a.serial % 100000, name.c_str(),
                    a.residue_name.c_str(), a.chain_id, a.residue_seq, a.insertion_code,
                    a.position.x(), a.position.y(), a.position.z(), 1.0, 0.0, a.element.c_str());
      out += buf;
    }
    if (wrap) out += "ENDMDL\n";
  }
  out += "END\n";
  return out;
}

}  // namespace dockscope
