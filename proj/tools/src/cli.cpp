// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope_app/cli.hpp"

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "dockscope/filter_script.hpp"
#include "dockscope/ingest.hpp"
#include "dockscope/isosurface.hpp"
#include "dockscope/naming.hpp"
#include "dockscope/parallel.hpp"
#include "dockscope/service/payloads.hpp"
#include "dockscope/synthetic.hpp"
#include "dockscope_app/http_server.hpp"

namespace dockscope::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "dockscope 0.1.0";

const std::vector<std::string> kExportKinds{"visible", "aggregates", "overview", "status", "filters", "properties",
                                            "protein-view", "matrix", "similarity", "density"};

std::string hash_file(const fs::path& p) { return sha256_hex(read_text_file(p)); }

// Directories hash as the digest of "name sha256" lines over their files.
std::string hash_input(const fs::path& p) {
  if (!fs::is_directory(p)) return hash_file(p);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(p))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string lines;
  for (const auto& f : files) lines += f.filename().string() + " " + hash_file(f) + "\n";
  return sha256_hex(lines);
}

struct Provenance {
  json data;

  std::string comment_block(std::string_view prefix = "# ") const {
    std::string out = std::string(prefix) + data["tool"].get<std::string>() + "\n";
    for (const auto& [k, v] : data["sha256"].items())
      out += std::string(prefix) + k + " sha256 " + v.get<std::string>() + "\n";
    return out;
  }
};

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io, "cannot write " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) fail(ErrorCode::io, "cannot write " + path.string());
}

void write_json(const fs::path& path, const Provenance& prov, json payload) {
  payload["provenance"] = prov.data;
  write_file(path, payload.dump(2) + "\n");
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = text.find(',', i);
    if (j == std::string::npos) j = text.size();
    out.push_back(static_cast<std::size_t>(std::stoul(text.substr(i, j - i))));
    i = j + 1;
  }
  return out;
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::script: return kExitScript;
    case ErrorCode::internal: return kExitInternal;
    default: return kExitInput;
  }
}

ExportTarget parse_export(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size())
    fail(ErrorCode::invalid_argument, "export must be <kind>:<path>", std::string(text));
  ExportTarget t{std::string(text.substr(0, colon)), fs::path(std::string(text.substr(colon + 1)))};
  if (std::find(kExportKinds.begin(), kExportKinds.end(), t.kind) == kExportKinds.end())
    fail(ErrorCode::invalid_argument, "unknown export kind '" + t.kind + "'", std::string(text));
  return t;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::internal, "sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

int run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.threads > 0) set_thread_count(static_cast<unsigned>(o.threads));
    Provenance prov;
    prov.data["tool"] = kVersion;
    prov.data["sha256"]["input"] = hash_input(o.input);
    prov.data["sha256"]["mapping"] = hash_file(o.mapping);
    if (o.properties) prov.data["sha256"]["properties"] = hash_file(*o.properties);
    std::string script_text;
    if (o.script) {
      script_text = read_text_file(*o.script);
      prov.data["sha256"]["script"] = sha256_hex(script_text);
    }
    if (o.reference) prov.data["sha256"]["reference"] = hash_file(*o.reference);
    prov.data["cutoff"] = o.cutoff;

    const ChainMapping mapping = ChainMapping::parse(read_text_file(o.mapping));
    std::optional<PropertyTable> props;
    if (o.properties) props = PropertyTable::parse(read_text_file(*o.properties));
    LoadOptions lopts;
    lopts.parse.include_hetatm = o.include_hetatm;
    lopts.parse.include_hydrogens = o.include_hydrogens;
    RawEnsemble raw = load_ensemble(o.input, mapping, props ? &*props : nullptr, lopts);
    const ComplexEnsemble ens = build_hierarchy(std::move(raw), HierarchyOptions{o.cutoff});
    for (const auto& w : ens.warnings()) err << "warning: " << w << "\n";

    std::optional<ProteinIndex> primary;
    if (o.primary) primary = parse_protein(ens, *o.primary);
    PropertyColumns extra;
    std::optional<ContactProfile> reference;
    if (o.primary_cc) reference = profile_of_cc(ens, parse_cc(ens, *o.primary_cc));
    if (o.reference) {
      const auto ref = load_reference_configuration(*o.reference, mapping, ens.proteins(), lopts);
      reference = profile_of_reference(ens, ref);
    }
    if (reference) extra[kSimilarityColumn] = similarity_column(ens, *reference);

    FilterQueue queue(ens.cc_count());
    if (o.script) {
      const auto statements = parse_filter_script(script_text, ens);
      apply_filter_script(queue, ResolveContext{ens, &extra}, statements);
    }
    const VisibilityState vis = evaluate(queue);
    out << vis.visible.count() << " of " << ens.cc_count() << " configurations visible\n";

    for (const auto& ex : o.exports) {
      if (ex.kind == "visible") {
        std::string text = prov.comment_block();
        for (auto cc : to_indices(vis.visible)) text += ens.configurations()[cc].id + "\n";
        write_file(ex.path, text);
      } else if (ex.kind == "aggregates") {
        write_json(ex.path, prov, {{"visible", payload::visible_ids(ens, vis.visible)},
                                   {"aggregates", payload::aggregates(ens, vis.visible)}});
      } else if (ex.kind == "overview") {
        write_json(ex.path, prov, payload::overview(ens, vis, BarScaling::independent));
      } else if (ex.kind == "status") {
        write_json(ex.path, prov, {{"status", payload::status(ens, queue, vis)},
                                   {"filters", payload::filter_list(ens, queue, vis)}});
      } else if (ex.kind == "filters") {
        write_file(ex.path, prov.comment_block() + format_filter_script(queue, ens));
      } else if (ex.kind == "properties") {
        write_json(ex.path, prov, payload::properties(ens, vis, extra, LevelItems{}));
      } else if (ex.kind == "protein-view") {
        if (!primary) fail(ErrorCode::invalid_argument, "protein-view export needs --primary");
        write_json(ex.path, prov, payload::protein_view(ens, protein_view_model(ens, *primary, vis.visible, o.condensed), vis));
      } else if (ex.kind == "matrix") {
        fs::create_directories(ex.path);
        for (const auto& ppe : ens.ppes()) {
          const auto model = residue_matrix_model(ens, ppe.pair, vis.visible, AxisSort::sequence);
          const auto& pa = ens.proteins()[ppe.pair.first];
          const auto& pb = ens.proteins()[ppe.pair.second];
          std::vector<std::vector<std::size_t>> grid(model.rows.residues.size(),
                                                     std::vector<std::size_t>(model.cols.residues.size(), 0));
          for (const auto& c : model.cells) grid[c.row][c.col] = c.count;
          std::string text = prov.comment_block();
          text += csv_escape(pa.name + "\\" + pb.name);
          for (auto r : model.cols.residues) text += "," + csv_escape(format_aa(ens, {ppe.pair.second, r}));
          text += "\n";
          for (std::size_t i = 0; i < grid.size(); ++i) {
            text += csv_escape(format_aa(ens, {ppe.pair.first, model.rows.residues[i]}));
            for (auto v : grid[i]) text += "," + std::to_string(v);
            text += "\n";
          }
          write_file(ex.path / (pa.name + "_" + pb.name + ".csv"), text);
        }
      } else if (ex.kind == "similarity") {
        auto col = extra.find(kSimilarityColumn);
        if (col == extra.end()) fail(ErrorCode::invalid_argument, "similarity export needs --primary-cc or --reference");
        std::vector<ScoredItem> items;
        for (auto cc : to_indices(vis.visible)) items.push_back({cc, col->second[cc]});
        std::string text = prov.comment_block() + "# reference " + reference->id + "\nrank,cc,score\n";
        std::size_t rank = 0;
        for (const auto& item : rank_by_similarity(std::move(items)))
          text += std::to_string(++rank) + "," + csv_escape(ens.configurations()[item.index].id) + "," +
                  (item.score ? number(*item.score) : std::string("NA")) + "\n";
        write_file(ex.path, text);
      } else if (ex.kind == "density") {
        if (!primary) fail(ErrorCode::invalid_argument, "density export needs --primary");
        if (vis.visible.none()) fail(ErrorCode::invalid_argument, "density export needs visible configurations");
        DensityParams params;
        params.spacing = o.spacing;
        if (o.primary_cc) params.reference_cc = parse_cc(ens, *o.primary_cc);
        const auto result = compute_density(ens, *primary, vis.visible, params);
        fs::create_directories(ex.path);
        const std::string pname = ens.proteins()[*primary].name;
        for (const auto& ch : result.channels) {
          const std::string cname = ens.proteins()[*ch.channel].name;
          const double max = ch.max_value();
          TriangleMesh mesh;
          if (max > 0 && o.iso <= 1.0) mesh = extract_isosurface(ch, o.iso * max);
          mesh.channel = ch.channel;
          write_file(ex.path / (pname + "_" + cname + ".stl"), to_stl(mesh, std::string(kVersion) + " " + cname));
          std::vector<std::string> comments{kVersion, "primary " + pname, "channel " + cname,
                                            "reference " + ens.configurations()[result.reference_cc].id};
          for (const auto& [k, v] : prov.data["sha256"].items()) comments.push_back(k + " sha256 " + v.get<std::string>());
          write_file(ex.path / (pname + "_" + cname + ".dx"), to_dx(ch, comments));
        }
      }
      out << "wrote " << ex.kind << " to " << ex.path.string() << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what();
    if (!e.detail().empty()) err << " (" << e.detail() << ")";
    err << "\n";
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error [io]: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kExitInternal;
  }
}

std::vector<BenchCell> bench(const BenchOptions& o) {
  std::vector<BenchCell> out;
  for (auto m : o.m)
    for (auto n : o.n) {
      SyntheticOptions so;
      so.configurations = n;
      so.proteins = m;
      so.residues = o.residues;
      so.atoms_per_residue = o.atoms_per_residue;
      so.seed = o.seed;
      const RawEnsemble raw = synthetic_ensemble(so);
      std::vector<double> times;
      std::size_t atoms = 0;
      for (const auto& p : raw.configurations.front().proteins) atoms += p.atoms.size();
      for (std::size_t r = 0; r < std::max<std::size_t>(1, o.repeats); ++r) {
        RawEnsemble copy = raw;
        const auto t0 = std::chrono::steady_clock::now();
        const auto ens = build_hierarchy(std::move(copy));
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      std::sort(times.begin(), times.end());
      out.push_back({m, n, atoms, times[times.size() / 2]});
    }
  return out;
}

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Drill-down analysis of docked protein complex ensembles"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunOptions ro;
  std::vector<std::string> exports;
  auto* run_cmd = app.add_subcommand("run", "Load an ensemble, apply a filter script and export results");
  run_cmd->add_option("--input", ro.input, "Directory of PDB files or one multi-model PDB file")->required();
  run_cmd->add_option("--mapping", ro.mapping, "chain,protein mapping file")->required();
  run_cmd->add_option("--properties", ro.properties, "Per-configuration property table");
  run_cmd->add_option("--script", ro.script, "Filter script");
  run_cmd->add_option("--export", exports, "kind:path (visible, aggregates, overview, status, filters, properties, "
                                           "protein-view, matrix, similarity, density)");
  run_cmd->add_option("--cutoff", ro.cutoff, "Contact distance cutoff in Angstrom")->capture_default_str();
  run_cmd->add_option("--spacing", ro.spacing, "Density grid spacing in Angstrom")->capture_default_str();
  run_cmd->add_option("--iso", ro.iso, "Iso level as a fraction of each channel's maximum")->capture_default_str();
  run_cmd->add_option("--threads", ro.threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("--primary", ro.primary, "Primary protein");
  run_cmd->add_option("--primary-cc", ro.primary_cc, "Primary configuration (similarity and density reference)");
  run_cmd->add_option("--reference", ro.reference, "External reference structure for similarity");
  run_cmd->add_flag("--condensed", ro.condensed, "Condensed protein view export");
  run_cmd->add_flag("--include-hetatm", ro.include_hetatm, "Keep HETATM records");
  run_cmd->add_flag("--include-hydrogens", ro.include_hydrogens, "Keep hydrogen atoms");

  BenchOptions bo;
  std::string bench_n = "100,200,400", bench_m = "4";
  auto* bench_cmd = app.add_subcommand("bench", "Time hierarchy construction on synthetic ensembles");
  bench_cmd->add_option("--n", bench_n, "Configuration counts, comma separated")->capture_default_str();
  bench_cmd->add_option("--m", bench_m, "Protein counts, comma separated")->capture_default_str();
  bench_cmd->add_option("--residues", bo.residues, "Residues per protein")->capture_default_str();
  bench_cmd->add_option("--atoms-per-residue", bo.atoms_per_residue)->capture_default_str();
  bench_cmd->add_option("--repeats", bo.repeats, "Timed repetitions (median reported)")->capture_default_str();
  bench_cmd->add_option("--seed", bo.seed)->capture_default_str();
  std::size_t bench_threads = 0;
  bench_cmd->add_option("--threads", bench_threads, "Worker threads (0 = all cores)");

  ServerOptions so;
  std::string listen = env_or("DOCKSCOPE_LISTEN", "127.0.0.1:8080");
  std::size_t max_upload_mb = std::stoul(env_or("DOCKSCOPE_MAX_UPLOAD_MB", "512"));
  so.worker_threads = std::stoul(env_or("DOCKSCOPE_THREADS", "4"));
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--listen", listen, "host:port (env DOCKSCOPE_LISTEN)")->capture_default_str();
  serve_cmd->add_option("--max-upload-mb", max_upload_mb, "Upload limit (env DOCKSCOPE_MAX_UPLOAD_MB)")
      ->capture_default_str();
  serve_cmd->add_option("--threads", so.worker_threads, "HTTP worker threads (env DOCKSCOPE_THREADS)")
      ->capture_default_str();

  SyntheticOptions syn;
  fs::path synth_out;
  bool synth_case = false;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic ensemble (PDB files, mapping, properties)");
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();
  synth_cmd->add_option("--ccs", syn.configurations, "Configurations")->capture_default_str();
  synth_cmd->add_option("--proteins", syn.proteins, "Proteins")->capture_default_str();
  synth_cmd->add_option("--residues", syn.residues, "Residues per protein")->capture_default_str();
  synth_cmd->add_option("--seed", syn.seed)->capture_default_str();
  synth_cmd->add_flag("--case", synth_case, "Three-protein scenario with a planted drill-down");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  if (*run_cmd) {
    try {
      for (const auto& e : exports) ro.exports.push_back(parse_export(e));
    } catch (const Error& e) {
      std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
      return kExitInput;
    }
    return run(ro, std::cout, std::cerr);
  }

  try {
    if (*bench_cmd) {
      bo.n = parse_sizes(bench_n);
      bo.m = parse_sizes(bench_m);
      if (bench_threads > 0) set_thread_count(static_cast<unsigned>(bench_threads));
      std::cout << "proteins,configurations,atoms_per_configuration,seconds\n";
      for (const auto& c : bench(bo))
        std::cout << c.m << "," << c.n << "," << c.atoms << "," << number(c.seconds) << "\n";
      return kExitOk;
    }
    if (*serve_cmd) {
      so = parse_listen_address(listen, so);
      so.max_upload_bytes = max_upload_mb << 20;
      service::Service service(service::ServiceOptions{so.max_upload_bytes});
      HttpServer server(service, so);
      const int port = server.bind();
      std::cout << "listening on " << so.host << ":" << port << std::endl;
      server.serve();
      return kExitOk;
    }
    if (*synth_cmd) {
      if (synth_case) {
        const auto cs = case_scenario(syn.configurations, std::min<std::size_t>(35, syn.configurations), syn.seed);
        write_ensemble_files(cs.ensemble, synth_out);
        json j{{"aap", {cs.aap_first, cs.aap_second}},
               {"residue", cs.residue},
               {"aap_ccs", cs.aap_ccs},
               {"planted_cc", cs.planted_cc}};
        write_file(synth_out / "scenario.json", j.dump(2) + "\n");
      } else {
        write_ensemble_files(synthetic_ensemble(syn), synth_out);
      }
      std::cout << "wrote " << syn.configurations << " configurations to " << synth_out.string() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error [internal]: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace dockscope::app
