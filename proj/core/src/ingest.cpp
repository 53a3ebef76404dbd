// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dockscope/error.hpp"
#include "dockscope/parallel.hpp"

namespace dockscope {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = eol + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = line.find(delim, pos);
    if (next == std::string_view::npos) {
      cells.push_back(trim(line.substr(pos)));
      break;
    }
    cells.push_back(trim(line.substr(pos, next - pos)));
    pos = next + 1;
  }
  return cells;
}

bool is_absent_marker(std::string_view s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "N/A";
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void copy_fixed(std::string_view src, char* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = i < src.size() ? src[i] : '\0';
}

struct ChainResidues {
  std::vector<Residue> residues;
  ProteinCoords coords;
};

// Groups one chain's atoms into residues in file order.
ChainResidues collect_chain(std::span<const Atom> atoms, char chain) {
  ChainResidues out;
  for (const auto& a : atoms) {
    if (a.chain_id != chain) continue;
    if (out.residues.empty() || out.residues.back().seq != a.residue_seq ||
        out.residues.back().icode != a.insertion_code ||
        out.residues.back().name != a.residue_name) {
      out.residues.push_back(Residue{a.residue_seq, a.insertion_code, a.residue_name});
    }
    AtomSite site;
    site.position = a.position;
    site.residue = static_cast<std::uint32_t>(out.residues.size() - 1);
    copy_fixed(a.name, site.name.data(), site.name.size());
    copy_fixed(a.element, site.element.data(), site.element.size());
    out.coords.atoms.push_back(site);
  }
  return out;
}

std::string describe(const NamedStructure& s) {
  return s.source.empty() ? "configuration " + s.id : s.source;
}

}  // namespace

std::string_view AtomSite::element_symbol() const {
  std::size_t n = 0;
  while (n < element.size() && element[n] != '\0') ++n;
  return {element.data(), n};
}

std::string_view AtomSite::atom_name() const {
  std::size_t n = 0;
  while (n < name.size() && name[n] != '\0') ++n;
  return {name.data(), n};
}

ChainMapping ChainMapping::parse(std::string_view text) {
  ChainMapping mapping;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    char delim = line.find('\t') != std::string_view::npos && line.find(',') == std::string_view::npos ? '\t' : ',';
    auto cells = split(line, delim);
    if (cells.size() < 2)
      fail(ErrorCode::parse, "mapping line " + std::to_string(i + 1) + ": expected chain,protein_name");
    if (mapping.entries_.empty() && lower(cells[0]) == "chain") continue;
    if (cells[0].size() != 1)
      fail(ErrorCode::parse, "mapping line " + std::to_string(i + 1) + ": chain id must be one character");
    mapping.add(cells[0][0], std::string(cells[1]));
  }
  if (mapping.entries_.empty()) fail(ErrorCode::parse, "mapping has no entries");
  return mapping;
}

void ChainMapping::add(char chain, std::string protein) {
  if (protein.empty()) fail(ErrorCode::invalid_argument, "empty protein name");
  for (char c : protein)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == ',')
      fail(ErrorCode::invalid_argument,
           "protein name '" + protein + "' must not contain whitespace, ':' or ','");
  for (const auto& e : entries_) {
    if (e.chain == chain)
      fail(ErrorCode::invalid_argument, std::string("duplicate chain id '") + chain + "' in mapping");
    if (e.protein == protein)
      fail(ErrorCode::invalid_argument, "duplicate protein name '" + protein + "' in mapping");
  }
  if (entries_.size() >= static_cast<std::size_t>(kMaxProteins))
    fail(ErrorCode::invalid_argument,
         "at most " + std::to_string(kMaxProteins) + " proteins are supported");
  entries_.push_back(Entry{chain, std::move(protein), static_cast<int>(entries_.size())});
}

const ChainMapping::Entry* ChainMapping::find_chain(char chain) const {
  for (const auto& e : entries_)
    if (e.chain == chain) return &e;
  return nullptr;
}

PropertyTable PropertyTable::parse(std::string_view text) {
  PropertyTable table;
  auto lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) fail(ErrorCode::parse, "property table is empty");
  const char delim = lines[first].find('\t') != std::string_view::npos ? '\t' : ',';
  auto header = split(lines[first], delim);
  if (header.size() < 2) fail(ErrorCode::parse, "property table header needs id and at least one property");
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) fail(ErrorCode::parse, "property table has an empty column name");
    table.names.emplace_back(header[c]);
  }
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto cells = split(lines[i], delim);
    const std::string where = "property table line " + std::to_string(i + 1);
    if (cells.size() != header.size())
      fail(ErrorCode::parse, where + ": expected " + std::to_string(header.size()) + " cells");
    std::vector<std::optional<double>> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (is_absent_marker(cells[c])) {
        row.emplace_back();
        continue;
      }
      double v = 0;
      std::string_view cell = cells[c];
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        fail(ErrorCode::parse, where + ": malformed value '" + std::string(cells[c]) + "'");
      if (!std::isfinite(v)) fail(ErrorCode::parse, where + ": non-finite value");
      row.push_back(v);
    }
    std::string id(cells[0]);
    if (!table.rows.emplace(id, std::move(row)).second)
      fail(ErrorCode::parse, where + ": duplicate configuration id '" + id + "'");
  }
  return table;
}

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
  return a < b;  // equal under natural order, e.g. "01" vs "1"
}

RawEnsemble assemble_ensemble(std::vector<NamedStructure> structures, const ChainMapping& mapping,
                              const PropertyTable* properties) {
  if (structures.empty()) fail(ErrorCode::empty_structure, "no configurations to load");
  std::sort(structures.begin(), structures.end(),
            [](const auto& x, const auto& y) { return natural_less(x.id, y.id); });
  for (std::size_t i = 1; i < structures.size(); ++i)
    if (structures[i].id == structures[i - 1].id)
      fail(ErrorCode::inconsistency, "duplicate configuration id '" + structures[i].id + "'");

  RawEnsemble ens;
  for (const auto& e : mapping.entries()) ens.proteins.push_back(ProteinInfo{e.protein, e.chain, e.color, {}});
  if (properties) ens.property_names = properties->names;

  ens.configurations.resize(structures.size());
  for (std::size_t ci = 0; ci < structures.size(); ++ci) {
    const auto& s = structures[ci];
    Configuration& cfg = ens.configurations[ci];
    cfg.id = s.id;
    for (std::size_t p = 0; p < ens.proteins.size(); ++p) {
      ProteinInfo& protein = ens.proteins[p];
      ChainResidues chain = collect_chain(s.atoms, protein.chain);
      if (chain.coords.atoms.empty())
        fail(ErrorCode::inconsistency,
             describe(s) + ": chain '" + std::string(1, protein.chain) + "' (" + protein.name +
                 ") is missing",
             "chain=" + std::string(1, protein.chain));
      if (ci == 0) {
        protein.residues = std::move(chain.residues);
      } else if (chain.residues != protein.residues) {
        fail(ErrorCode::integrity,
             describe(s) + ": residue sequence of " + protein.name + " differs from configuration " +
                 ens.configurations.front().id);
      }
      cfg.proteins.push_back(std::move(chain.coords));
    }
    cfg.properties.assign(ens.property_names.size(), std::nullopt);
  }

  if (properties) {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < ens.configurations.size(); ++i) by_id.emplace(ens.configurations[i].id, i);
    for (const auto& [id, row] : properties->rows) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        ens.warnings.push_back("property row for unknown configuration '" + id + "' dropped");
        continue;
      }
      ens.configurations[it->second].properties = row;
    }
  }
  return ens;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RawEnsemble load_ensemble(const std::filesystem::path& input, const ChainMapping& mapping,
                          const PropertyTable* properties, const LoadOptions& options) {
  namespace fs = std::filesystem;
  std::vector<NamedStructure> structures;
  std::vector<std::string> warnings;
  if (fs::is_directory(input)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
      if (!entry.is_regular_file()) continue;
      std::string ext = lower(entry.path().extension().string());
      if (ext == ".pdb" || ext == ".ent") files.push_back(entry.path());
    }
    if (files.empty()) fail(ErrorCode::empty_structure, "no structure files in " + input.string());
    std::sort(files.begin(), files.end());
    structures.resize(files.size());
    std::vector<std::string> multi_model(files.size());
    parallel_for(0, files.size(), [&](std::size_t i) {
      std::vector<Model> models;
      try {
        models = parse_structure(read_text_file(files[i]), options.parse);
      } catch (const Error& e) {
        throw Error(e.code(), files[i].filename().string() + ": " + e.what(), e.detail());
      }
      if (models.size() > 1)
        multi_model[i] = files[i].filename().string() + " has " + std::to_string(models.size()) +
                         " models; only the first is used";
      structures[i] = NamedStructure{files[i].stem().string(), std::move(models.front().atoms),
                                     files[i].filename().string()};
    });
    for (auto& w : multi_model)
      if (!w.empty()) warnings.push_back(std::move(w));
  } else if (fs::is_regular_file(input)) {
    auto models = parse_structure(read_text_file(input), options.parse);
    for (auto& m : models)
      structures.push_back(NamedStructure{std::to_string(m.model_id), std::move(m.atoms),
                                          input.filename().string() + " model " + std::to_string(m.model_id)});
  } else {
    fail(ErrorCode::io, "input not found: " + input.string());
  }
  RawEnsemble ens = assemble_ensemble(std::move(structures), mapping, properties);
  ens.warnings.insert(ens.warnings.begin(), warnings.begin(), warnings.end());
  return ens;
}

ReferenceConfiguration make_reference(std::string id, std::span<const Atom> atoms,
                                      const ChainMapping& mapping,
                                      std::span<const ProteinInfo> proteins) {
  ReferenceConfiguration ref;
  ref.id = std::move(id);
  ref.proteins.resize(proteins.size());
  bool any = false;
  for (std::size_t p = 0; p < proteins.size(); ++p) {
    const ChainMapping::Entry* entry = nullptr;
    for (const auto& e : mapping.entries())
      if (e.protein == proteins[p].name) entry = &e;
    if (!entry) continue;
    ChainResidues chain = collect_chain(atoms, entry->chain);
    if (chain.coords.atoms.empty()) continue;

    std::vector<std::uint32_t> remap(chain.residues.size());
    std::uint32_t foreign = static_cast<std::uint32_t>(proteins[p].residues.size());
    for (std::size_t r = 0; r < chain.residues.size(); ++r) {
      const auto& res = chain.residues[r];
      auto it = std::find_if(proteins[p].residues.begin(), proteins[p].residues.end(),
                             [&](const Residue& x) { return x.seq == res.seq && x.icode == res.icode; });
      remap[r] = it != proteins[p].residues.end()
                     ? static_cast<std::uint32_t>(it - proteins[p].residues.begin())
                     : foreign++;
    }
    for (auto& a : chain.coords.atoms) a.residue = remap[a.residue];
    ref.proteins[p] = std::move(chain.coords);
    any = true;
  }
  if (!any)
    fail(ErrorCode::invalid_argument, "reference " + ref.id + " has no chain that maps to an ensemble protein");
  return ref;
}

ReferenceConfiguration load_reference_configuration(const std::filesystem::path& file,
                                                    const ChainMapping& mapping,
                                                    std::span<const ProteinInfo> proteins,
                                                    const LoadOptions& options) {
  auto models = parse_structure(read_text_file(file), options.parse);
  return make_reference(file.stem().string(), models.front().atoms, mapping, proteins);
}

}  // namespace dockscope
