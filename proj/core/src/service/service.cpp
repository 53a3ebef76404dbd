// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/service/service.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "dockscope/filter_script.hpp"
#include "dockscope/ingest.hpp"
#include "dockscope/isosurface.hpp"
#include "dockscope/naming.hpp"
#include "dockscope/service/payloads.hpp"
#include "dockscope/synthetic.hpp"

namespace dockscope::service {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::degenerate_geometry: return 422;
    case ErrorCode::internal: return 500;
    default: return 400;
  }
}

Session::Session(std::string id) : id_(std::move(id)), current_(std::make_shared<Snapshot>()) {}

std::shared_ptr<const Snapshot> Session::snapshot() const {
  std::lock_guard lock(publish_);
  return current_;
}

std::shared_ptr<const Snapshot> Session::update(const std::function<void(Snapshot&)>& mutate) {
  std::lock_guard writer(writer_);
  auto next = std::make_shared<Snapshot>(*snapshot());
  mutate(*next);
  next->generation += 1;
  std::shared_ptr<const Snapshot> published = std::move(next);
  std::lock_guard lock(publish_);
  current_ = published;
  return published;
}

std::shared_ptr<const DensityResult> Session::density(const Snapshot& snap, ProteinIndex primary,
                                                      const DensityParams& params) {
  char key[160];
  std::snprintf(key, sizeof key, "%llu/%u/%.17g/%.17g/%d", static_cast<unsigned long long>(snap.generation),
                static_cast<unsigned>(primary), params.spacing, params.sigma_scale,
                params.reference_cc ? static_cast<int>(*params.reference_cc) : -1);
  {
    std::lock_guard lock(cache_mutex_);
    if (cache_ && cache_key_ == key) return cache_;
  }
  auto result = std::make_shared<const DensityResult>(
      compute_density(*snap.ensemble, primary, snap.visibility.visible, params));
  std::lock_guard lock(cache_mutex_);
  cache_key_ = key;
  cache_ = result;
  return result;
}

namespace {

Response json_response(int status, const json& body) {
  Response r;
  r.status = status;
  r.body = body.dump();
  return r;
}

Response error_response(int status, std::string_view code, const std::string& message, const std::string& detail) {
  return json_response(status, {{"code", code}, {"message", message}, {"detail", detail}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find(',', i);
    if (j == std::string_view::npos) j = s.size();
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

class Handler {
 public:
  Handler(Service& service, const Request& req) : service_(service), req_(req) {}

  Response run();

 private:
  // --- request helpers
  std::optional<std::string> query(const char* key) const {
    auto it = req_.query.find(key);
    if (it == req_.query.end() || it->second.empty()) return std::nullopt;
    return it->second;
  }
  double query_number(const char* key, double fallback) const {
    auto v = query(key);
    if (!v) return fallback;
    double x = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || ptr != v->data() + v->size() || !std::isfinite(x))
      fail(ErrorCode::invalid_argument, std::string("query parameter '") + key + "' must be a number", *v);
    return x;
  }
  bool query_bool(const char* key, bool fallback) const {
    auto v = query(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    fail(ErrorCode::invalid_argument, std::string("query parameter '") + key + "' must be true or false", *v);
  }
  json body() const {
    if (req_.body.empty()) return json::object();
    json j = json::parse(req_.body, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::parse, "request body is not valid JSON");
    return j;
  }

  // --- response helpers
  Response reply(const Snapshot& snap, json payload, int status = 200) const {
    payload["generation"] = snap.generation;
    if (auto g = query("generation"); g && *g != std::to_string(snap.generation)) payload["stale"] = true;
    return json_response(status, payload);
  }
  Response reply_raw(const Snapshot& snap, std::string content_type, std::string body) const {
    Response r;
    r.content_type = std::move(content_type);
    r.body = std::move(body);
    r.headers["X-Dockscope-Generation"] = std::to_string(snap.generation);
    return r;
  }
  Response mutation_reply(const Snapshot& snap, json extra = json::object(), int status = 200) const {
    const auto& ens = *snap.ensemble;
    extra["filters"] = payload::filter_list(ens, snap.queue, snap.visibility);
    extra["status"] = payload::status(ens, snap.queue, snap.visibility);
    return reply(snap, std::move(extra), status);
  }

  const ComplexEnsemble& loaded(const Snapshot& snap) const {
    if (!snap.ensemble) fail(ErrorCode::invalid_argument, "no ensemble loaded in this session");
    return *snap.ensemble;
  }

  ProteinIndex protein_param(const Snapshot& snap, const char* key) const {
    if (auto v = query(key)) return parse_protein(*snap.ensemble, *v);
    if (snap.selection.primary_protein) return *snap.selection.primary_protein;
    fail(ErrorCode::invalid_argument, std::string("missing '") + key + "' and no primary protein is set");
  }

  ProteinPair pair_param(const Snapshot& snap) const {
    if (auto v = query("pair")) {
      auto parts = split_list(*v);
      if (parts.size() != 2) fail(ErrorCode::invalid_argument, "pair must be '<protein>,<protein>'", *v);
      return parse_pair(*snap.ensemble, parts[0], parts[1]);
    }
    if (snap.selection.primary_ppe) return *snap.selection.primary_ppe;
    fail(ErrorCode::invalid_argument, "missing 'pair' and no primary PPE is set");
  }

  // --- endpoints
  Response session_routes(const std::shared_ptr<Session>& session, const std::vector<std::string>& rest);
  Response load_ensemble(Session& session);
  Response filters(Session& session, const std::vector<std::string>& rest);
  Response selection(Session& session, const std::vector<std::string>& rest);
  Response primary(Session& session);
  Response density(Session& session, const std::string& format);

  Service& service_;
  const Request& req_;
};

struct MethodNotAllowed {};

[[noreturn]] void method_not_allowed() { throw MethodNotAllowed{}; }

Response Handler::run() {
  const auto parts = split_path(req_.path);
  if (parts.empty() || parts == std::vector<std::string>{"health"})
    return json_response(200, {{"status", "ok"}, {"service", "dockscope"}});
  if (parts[0] != "sessions") fail(ErrorCode::not_found, "unknown endpoint", req_.path);
  if (parts.size() == 1) {
    if (req_.method != "POST") method_not_allowed();
    auto s = service_.create_session();
    return json_response(201, {{"session", s->id()}, {"generation", s->snapshot()->generation}});
  }
  auto session = service_.find_session(parts[1]);
  if (!session) fail(ErrorCode::not_found, "unknown session", parts[1]);
  return session_routes(session, std::vector<std::string>(parts.begin() + 2, parts.end()));
}

Response Handler::session_routes(const std::shared_ptr<Session>& session, const std::vector<std::string>& rest) {
  const std::string& m = req_.method;
  if (rest.empty()) {
    if (m == "DELETE") return json_response(200, {{"deleted", session->id()}});
    if (m != "GET") method_not_allowed();
    auto snap = session->snapshot();
    json j{{"session", session->id()}, {"loaded", static_cast<bool>(snap->ensemble)}};
    if (snap->ensemble) j["status"] = payload::status(*snap->ensemble, snap->queue, snap->visibility);
    return reply(*snap, j);
  }
  const std::string& what = rest[0];
  if (what == "ensemble") {
    if (m != "POST") method_not_allowed();
    return load_ensemble(*session);
  }
  if (what == "filters") return filters(*session, rest);
  if (what == "selection") return selection(*session, rest);
  if (what == "primary") {
    if (m != "POST") method_not_allowed();
    return primary(*session);
  }
  if (rest.size() > 2) fail(ErrorCode::not_found, "unknown endpoint", req_.path);
  if (m != "GET") method_not_allowed();

  auto snap = session->snapshot();
  const auto& ens = loaded(*snap);
  const auto& vis = snap->visibility;

  if (what == "status") {
    json j{{"status", payload::status(ens, snap->queue, vis)}, {"proteins", payload::protein_list(ens)}};
    json sel = payload::selection(ens, snap->selection);
    j["primary_protein"] = sel["primary_protein"];
    j["primary_ppe"] = sel["primary_ppe"];
    j["primary_cc"] = sel["primary_cc"];
    return reply(*snap, j);
  }
  if (what == "visible") return reply(*snap, {{"visible", payload::visible_ids(ens, vis.visible)}});
  if (what == "aggregates")
    return reply(*snap, {{"visible", payload::visible_ids(ens, vis.visible)},
                         {"aggregates", payload::aggregates(ens, vis.visible)}});
  if (what == "overview") {
    auto scaling = payload::parse_scaling(query("scaling").value_or("independent"));
    if (!scaling) fail(ErrorCode::invalid_argument, "scaling must be independent or absolute");
    json j = payload::overview(ens, vis, *scaling);
    json sel = payload::selection(ens, snap->selection);
    j["primary_protein"] = sel["primary_protein"];
    j["primary_ppe"] = sel["primary_ppe"];
    return reply(*snap, std::move(j));
  }
  if (what == "properties")
    return reply(*snap, payload::properties(ens, vis, snap->extra_columns, snap->selection.items));
  if (what == "protein-view") {
    const ProteinIndex p = protein_param(*snap, "protein");
    return reply(*snap, payload::protein_view(ens, protein_view_model(ens, p, vis.visible, query_bool("condensed", false)), vis));
  }
  if (what == "residue-matrix") {
    auto sort = payload::parse_sort(query("sort").value_or("sequence"));
    if (!sort) fail(ErrorCode::invalid_argument, "sort must be sequence, frequency, hydrophobicity or charge");
    const ProteinPair pair = pair_param(*snap);
    if (!ens.find_ppe(pair)) fail(ErrorCode::not_found, "proteins are never in contact", payload::pair(ens, pair).dump());
    return reply(*snap, payload::residue_matrix(ens, residue_matrix_model(ens, pair, vis.visible, *sort), vis));
  }
  if (what == "contact-lists") {
    const ProteinPair pair = pair_param(*snap);
    auto ppe = ens.find_ppe(pair);
    if (!ppe) fail(ErrorCode::not_found, "proteins are never in contact", payload::pair(ens, pair).dump());
    std::vector<PpcIndex> ppcs;
    if (auto list = query("ppcs")) {
      for (const auto& id : split_list(*list)) {
        auto ppc = ens.find_ppc(parse_cc(ens, id), pair);
        if (!ppc) fail(ErrorCode::not_found, "the pair is not in contact in " + id, id);
        ppcs.push_back(*ppc);
      }
    } else {
      for (auto i : ens.ppes()[*ppe].ppcs)
        if (vis.visible.test(ens.ppcs()[i].cc)) ppcs.push_back(i);
    }
    std::optional<PpcIndex> reference;
    std::optional<CcIndex> ref_cc;
    if (auto r = query("reference")) ref_cc = parse_cc(ens, *r);
    else ref_cc = snap->selection.primary_cc;
    if (ref_cc) {
      reference = ens.find_ppc(*ref_cc, pair);
      if (!reference && query("reference"))
        fail(ErrorCode::not_found, "the pair is not in contact in the reference configuration");
    }
    return reply(*snap, payload::contact_lists(ens, contact_list_model(ens, pair, ppcs, reference)));
  }
  if (what == "similarity") {
    auto it = snap->extra_columns.find(kSimilarityColumn);
    if (it == snap->extra_columns.end())
      fail(ErrorCode::invalid_argument, "set a primary configuration or reference first");
    std::vector<ScoredItem> items;
    const bool all = query_bool("all", false);
    for (CcIndex cc = 0; cc < ens.cc_count(); ++cc)
      if (all || vis.visible.test(cc)) items.push_back({cc, it->second[cc]});
    return reply(*snap, {{"ranking", payload::similarity_ranking(ens, rank_by_similarity(std::move(items)))}});
  }
  if (what == "density-mesh") return density(*session, rest.size() == 2 ? rest[1] : "json");
  if (what == "density-grid") return density(*session, "dx");
  if (what == "exploded-cc") {
    auto id = query("cc");
    CcIndex cc = id ? parse_cc(ens, *id) : snap->selection.primary_cc.value_or(CcIndex{0});
    if (!id && !snap->selection.primary_cc) fail(ErrorCode::invalid_argument, "missing 'cc' and no primary CC is set");
    const double gap = query_number("gap", kDefaultExplodeGap);
    const int iters = static_cast<int>(query_number("max_iters", kDefaultExplodeIterations));
    return reply(*snap, payload::exploded(ens, cc, exploded_layout(ens.configurations()[cc].proteins, gap, iters)));
  }
  if (what == "structure") {
    auto id = query("cc");
    if (!id) fail(ErrorCode::invalid_argument, "missing 'cc'");
    const CcIndex cc = parse_cc(ens, *id);
    RawEnsemble view;
    view.proteins = ens.proteins();
    view.configurations.push_back(ens.configurations()[cc]);
    Model model{1, configuration_atoms(view, 0)};
    return reply_raw(*snap, "chemical/x-pdb", write_structure(std::span(&model, 1)));
  }
  fail(ErrorCode::not_found, "unknown endpoint", req_.path);
}

Response Handler::load_ensemble(Session& session) {
  if (req_.body.size() > service_.options().max_upload_bytes)
    return error_response(413, "too_large", "request body exceeds the upload limit", std::to_string(req_.body.size()));
  const json b = body();
  auto text_or_file = [&](const char* text_key, const char* path_key) -> std::optional<std::string> {
    if (auto it = b.find(text_key); it != b.end() && it->is_string()) return it->get<std::string>();
    if (auto it = b.find(path_key); it != b.end() && it->is_string()) return read_text_file(it->get<std::string>());
    return std::nullopt;
  };
  auto mapping_text = text_or_file("mapping", "mapping_path");
  if (!mapping_text) fail(ErrorCode::invalid_argument, "a chain mapping is required ('mapping' or 'mapping_path')");
  const ChainMapping mapping = ChainMapping::parse(*mapping_text);
  std::optional<PropertyTable> props;
  if (auto t = text_or_file("properties", "properties_path")) props = PropertyTable::parse(*t);
  LoadOptions opts;
  opts.parse.include_hetatm = b.value("include_hetatm", false);
  opts.parse.include_hydrogens = b.value("include_hydrogens", false);
  HierarchyOptions hopts;
  hopts.cutoff = b.value("cutoff", kDefaultContactCutoff);

  RawEnsemble raw;
  if (auto files = b.find("files"); files != b.end()) {
    if (!files->is_array() || files->empty()) fail(ErrorCode::empty_structure, "'files' must be a nonempty array");
    std::vector<NamedStructure> structures;
    for (const auto& f : *files) {
      const std::string name = f.at("name").get<std::string>();
      auto models = parse_structure(f.at("content").get<std::string>(), opts.parse);
      structures.push_back({std::filesystem::path(name).stem().string(), std::move(models.front().atoms), name});
    }
    raw = assemble_ensemble(std::move(structures), mapping, props ? &*props : nullptr);
  } else if (auto input = b.find("input"); input != b.end() && input->is_string()) {
    raw = dockscope::load_ensemble(input->get<std::string>(), mapping, props ? &*props : nullptr, opts);
  } else {
    fail(ErrorCode::invalid_argument, "an ensemble needs 'input' (path) or 'files' (uploads)");
  }
  auto ens = std::make_shared<const ComplexEnsemble>(build_hierarchy(std::move(raw), hopts));

  auto snap = session.update([&](Snapshot& s) {
    s.ensemble = ens;
    s.queue = FilterQueue(ens->cc_count());
    s.visibility = evaluate(s.queue);
    s.selection = empty_selection(*ens);
    s.extra_columns.clear();
    s.primary_profile.reset();
  });
  json j{{"session", session.id()},
         {"proteins", payload::protein_list(*ens)},
         {"ccs", ens->cc_count()},
         {"ppes", ens->ppes().size()},
         {"warnings", ens->warnings()}};
  return mutation_reply(*snap, std::move(j), 201);
}

Response Handler::filters(Session& session, const std::vector<std::string>& rest) {
  const std::string& m = req_.method;
  if (rest.size() == 1) {
    if (m == "GET") {
      auto snap = session.snapshot();
      loaded(*snap);
      return mutation_reply(*snap);
    }
    if (m == "POST") {
      const json b = body();
      std::vector<int> added;
      auto snap = session.update([&](Snapshot& s) {
        const auto& ens = loaded(s);
        const ResolveContext ctx{ens, &s.extra_columns};
        std::vector<FilterStatement> statements;
        if (auto it = b.find("script"); it != b.end()) {
          statements = parse_filter_script(it->get<std::string>(), ens);
        } else if (auto list = b.find("filters"); list != b.end()) {
          for (const auto& f : *list) statements.push_back(payload::parse_filter_request(f, ens));
        } else {
          statements.push_back(payload::parse_filter_request(b, ens));
        }
        added = apply_filter_script(s.queue, ctx, statements);
        s.visibility = evaluate(s.queue);
      });
      return mutation_reply(*snap, {{"added", added}}, 201);
    }
    if (m == "DELETE") {
      auto snap = session.update([&](Snapshot& s) {
        loaded(s);
        s.queue.clear();
        s.visibility = evaluate(s.queue);
      });
      return mutation_reply(*snap);
    }
    if (m == "PATCH") {
      const json b = body();
      auto it = b.find("enabled");
      if (it == b.end() || !it->is_boolean()) fail(ErrorCode::invalid_argument, "bulk update needs 'enabled'");
      const bool enabled = it->get<bool>();
      auto snap = session.update([&](Snapshot& s) {
        loaded(s);
        std::vector<int> ids;
        for (const auto& r : s.queue.records()) ids.push_back(r.id);
        for (int id : ids) s.queue.set_enabled(id, enabled);
        s.visibility = evaluate(s.queue);
      });
      return mutation_reply(*snap);
    }
    method_not_allowed();
  }
  if (rest.size() != 2) fail(ErrorCode::not_found, "unknown endpoint", req_.path);
  if (rest[1] == "script") {
    if (m != "GET") method_not_allowed();
    auto snap = session.snapshot();
    return reply_raw(*snap, "text/plain", format_filter_script(snap->queue, loaded(*snap)));
  }
  int id = 0;
  auto [ptr, ec] = std::from_chars(rest[1].data(), rest[1].data() + rest[1].size(), id);
  if (ec != std::errc() || ptr != rest[1].data() + rest[1].size())
    fail(ErrorCode::not_found, "unknown filter", rest[1]);
  if (m == "GET") {
    auto snap = session.snapshot();
    const auto& ens = loaded(*snap);
    const auto& r = snap->queue.get(id);
    json j = payload::filter_request(r.kind, r.subject, r.enabled, ens);
    j["id"] = r.id;
    j["label"] = r.label;
    return reply(*snap, std::move(j));
  }
  if (m == "DELETE") {
    auto snap = session.update([&](Snapshot& s) {
      loaded(s);
      s.queue.remove(id);
      s.visibility = evaluate(s.queue);
    });
    return mutation_reply(*snap);
  }
  if (m == "PATCH") {
    const json b = body();
    auto snap = session.update([&](Snapshot& s) {
      const auto& ens = loaded(s);
      const auto& rec = s.queue.get(id);
      if (b.contains("min") || b.contains("max")) {
        const auto* range = std::get_if<PropertyRange>(&rec.subject);
        if (!range) fail(ErrorCode::invalid_argument, "only predicate filters have a range");
        auto num = [&](const char* key, double fallback) {
          if (!b.contains(key)) return fallback;
          const auto& v = b.at(key);
          if (v.is_null()) return std::string(key) == "min" ? -std::numeric_limits<double>::infinity()
                                                             : std::numeric_limits<double>::infinity();
          if (!v.is_number()) fail(ErrorCode::invalid_argument, std::string(key) + " must be a number or null");
          return v.get<double>();
        };
        const double lo = num("min", range->min), hi = num("max", range->max);
        set_range(s.queue, ResolveContext{ens, &s.extra_columns}, id, lo, hi);
      }
      if (auto it = b.find("enabled"); it != b.end()) {
        if (!it->is_boolean()) fail(ErrorCode::invalid_argument, "enabled must be a boolean");
        s.queue.set_enabled(id, it->get<bool>());
      }
      s.visibility = evaluate(s.queue);
    });
    return mutation_reply(*snap);
  }
  method_not_allowed();
}

Response Handler::selection(Session& session, const std::vector<std::string>& rest) {
  const std::string& m = req_.method;
  if (rest.size() == 1 && m == "GET") {
    auto snap = session.snapshot();
    return reply(*snap, payload::selection(loaded(*snap), snap->selection));
  }
  if (m != "POST") method_not_allowed();
  const json b = body();
  std::shared_ptr<const Snapshot> snap;
  if (rest.size() == 2 && rest[1] == "propagate") {
    const std::string dir = b.value("direction", "up_then_down");
    Propagation p;
    if (dir == "up") p = Propagation::up;
    else if (dir == "down") p = Propagation::down;
    else if (dir == "up_then_down") p = Propagation::up_then_down;
    else fail(ErrorCode::invalid_argument, "direction must be up, down or up_then_down", dir);
    snap = session.update([&](Snapshot& s) { propagate_selection(loaded(s), s.selection, p); });
  } else if (rest.size() == 1) {
    snap = session.update([&](Snapshot& s) {
      const auto& ens = loaded(s);
      if (auto cells = b.find("protein_view_cells"); cells != b.end()) {
        const ProteinIndex primary = parse_protein(ens, cells->at("protein").get<std::string>());
        std::vector<std::pair<std::uint32_t, ProteinIndex>> list;
        for (const auto& c : cells->at("cells")) {
          const AminoAcidId aa = parse_aa(ens, c.at(0).get<std::string>());
          if (aa.protein != primary) fail(ErrorCode::invalid_argument, "cell residue must belong to the primary protein");
          list.emplace_back(aa.residue, parse_protein(ens, c.at(1).get<std::string>()));
        }
        select_protein_view_cells(ens, s.selection, primary, list, s.visibility.visible);
        return;
      }
      auto level = parse_level(b.value("level", ""));
      if (!level) fail(ErrorCode::invalid_argument, "selection needs a level");
      const json items = b.value("items", json::array());
      switch (*level) {
        case Level::cc: {
          std::vector<CcIndex> v;
          for (const auto& i : items) v.push_back(parse_cc(ens, i.get<std::string>()));
          select_ccs(ens, s.selection, std::move(v));
          break;
        }
        case Level::ppe: {
          std::vector<ProteinPair> v;
          for (const auto& i : items) v.push_back(parse_pair(ens, i.at(0).get<std::string>(), i.at(1).get<std::string>()));
          select_ppes(ens, s.selection, std::move(v));
          break;
        }
        case Level::ppc: {
          std::vector<PpcIndex> v;
          for (const auto& i : items) {
            const auto& pr = i.at("pair");
            auto ppc = ens.find_ppc(parse_cc(ens, i.at("cc").get<std::string>()),
                                    parse_pair(ens, pr.at(0).get<std::string>(), pr.at(1).get<std::string>()));
            if (!ppc) fail(ErrorCode::not_found, "the pair is not in contact in that configuration");
            v.push_back(*ppc);
          }
          select_ppcs(ens, s.selection, std::move(v));
          break;
        }
        case Level::aap: {
          std::vector<AapKey> v;
          for (const auto& i : items)
            v.push_back(make_aap_key(parse_aa(ens, i.at(0).get<std::string>()), parse_aa(ens, i.at(1).get<std::string>())));
          select_aaps(ens, s.selection, std::move(v));
          break;
        }
        case Level::aa: {
          std::vector<AminoAcidId> v;
          for (const auto& i : items) v.push_back(parse_aa(ens, i.get<std::string>()));
          select_aas(ens, s.selection, std::move(v));
          break;
        }
      }
    });
  } else {
    fail(ErrorCode::not_found, "unknown endpoint", req_.path);
  }
  return reply(*snap, payload::selection(*snap->ensemble, snap->selection));
}

Response Handler::primary(Session& session) {
  const json b = body();
  auto snap = session.update([&](Snapshot& s) {
    const auto& ens = loaded(s);
    if (auto it = b.find("protein"); it != b.end()) set_primary_protein(ens, s.selection, parse_protein(ens, it->get<std::string>()));
    if (auto it = b.find("ppe"); it != b.end())
      set_primary_ppe(ens, s.selection, parse_pair(ens, it->at(0).get<std::string>(), it->at(1).get<std::string>()));
    std::optional<ContactProfile> profile;
    if (auto it = b.find("cc"); it != b.end()) {
      if (it->is_null()) {
        s.selection.primary_cc.reset();
        s.primary_profile.reset();
        s.extra_columns.erase(kSimilarityColumn);
      } else {
        const CcIndex cc = parse_cc(ens, it->get<std::string>());
        s.selection.primary_cc = cc;
        profile = profile_of_cc(ens, cc);
      }
    }
    if (auto it = b.find("reference"); it != b.end()) {
      std::vector<Atom> atoms;
      std::string id = it->value("id", std::string("reference"));
      ParseOptions popts;
      if (it->contains("content")) {
        atoms = parse_structure(it->at("content").get<std::string>(), popts).front().atoms;
      } else if (it->contains("path")) {
        const std::string path = it->at("path").get<std::string>();
        atoms = parse_structure(read_text_file(path), popts).front().atoms;
        if (!it->contains("id")) id = std::filesystem::path(path).stem().string();
      } else {
        fail(ErrorCode::invalid_argument, "reference needs 'path' or 'content'");
      }
      ChainMapping mapping;
      for (const auto& p : ens.proteins()) mapping.add(p.chain, p.name);
      const auto ref = make_reference(id, atoms, mapping, ens.proteins());
      profile = profile_of_reference(ens, ref);
    }
    if (profile) {
      s.extra_columns[kSimilarityColumn] = similarity_column(ens, *profile);
      s.primary_profile = std::move(profile);
    }
  });
  json j = payload::selection(*snap->ensemble, snap->selection);
  j["reference"] = snap->primary_profile ? json(snap->primary_profile->id) : json(nullptr);
  return reply(*snap, std::move(j));
}

Response Handler::density(Session& session, const std::string& format) {
  auto snap = session.snapshot();
  const auto& ens = loaded(*snap);
  const ProteinIndex primary = protein_param(*snap, "protein");
  DensityParams params;
  params.spacing = query_number("spacing", 1.0);
  params.sigma_scale = query_number("sigma_scale", 1.0);
  if (auto r = query("reference_cc")) params.reference_cc = parse_cc(ens, *r);
  else params.reference_cc = snap->selection.primary_cc;
  auto result = session.density(*snap, primary, params);
  const double fraction = query_number("iso", kDefaultIsoFraction);
  if (!(fraction > 0)) fail(ErrorCode::invalid_argument, "iso must be positive");

  std::optional<ProteinIndex> channel;
  if (auto c = query("channel")) channel = parse_protein(ens, *c);
  auto mesh_of = [&](const DensityField& f) {
    const double max = f.max_value();
    if (!(max > 0) || fraction > 1.0) {
      TriangleMesh empty;
      empty.channel = f.channel;
      empty.iso = fraction * max;
      return empty;
    }
    return extract_isosurface(f, fraction * max);
  };
  auto pick = [&]() -> const DensityField& {
    if (!channel) {
      if (result->channels.size() == 1) return result->channels.front();
      fail(ErrorCode::invalid_argument, "select a partner with 'channel'");
    }
    for (const auto& f : result->channels)
      if (f.channel == channel) return f;
    fail(ErrorCode::not_found, "the partner has no density channel for this primary protein");
  };

  if (format == "stl") {
    const auto& f = pick();
    return reply_raw(*snap, "model/stl", to_stl(mesh_of(f), "dockscope " + ens.proteins()[*f.channel].name));
  }
  if (format == "dx") {
    const auto& f = pick();
    return reply_raw(*snap, "text/plain",
                     to_dx(f, {"dockscope density", "primary " + ens.proteins()[primary].name,
                               "channel " + ens.proteins()[*f.channel].name,
                               "generation " + std::to_string(snap->generation)}));
  }
  if (format != "json") fail(ErrorCode::not_found, "unknown mesh format", format);
  json meshes = json::array();
  for (const auto& f : result->channels) {
    if (channel && f.channel != channel) continue;
    json m = to_json(mesh_of(f));
    m["channel"] = ens.proteins()[*f.channel].name;
    m["iso_fraction"] = fraction;
    meshes.push_back(std::move(m));
  }
  return reply(*snap, {{"density", payload::density_summary(ens, *result)}, {"meshes", std::move(meshes)}});
}

}  // namespace

Service::Service(ServiceOptions options) : options_(options) {}

std::shared_ptr<Session> Service::create_session() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(sessions_mutex_);
  for (;;) {
    char id[17];
    std::snprintf(id, sizeof id, "%016llx", static_cast<unsigned long long>(rng()));
    if (sessions_.count(id)) continue;
    auto s = std::make_shared<Session>(id);
    sessions_.emplace(id, s);
    return s;
  }
}

std::shared_ptr<Session> Service::find_session(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::dispatch(const Request& request) {
  auto parts = split_path(request.path);
  if (request.method == "DELETE" && parts.size() == 2 && parts[0] == "sessions") {
    std::lock_guard lock(sessions_mutex_);
    if (!sessions_.erase(parts[1])) fail(ErrorCode::not_found, "unknown session", parts[1]);
    return json_response(200, {{"deleted", parts[1]}});
  }
  return Handler(*this, request).run();
}

Response Service::handle(const Request& request) {
  try {
    return dispatch(request);
  } catch (const MethodNotAllowed&) {
    return error_response(405, "method_not_allowed", "method not allowed", request.method + " " + request.path);
  } catch (const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what(), e.detail());
  } catch (const json::exception& e) {
    return error_response(400, "invalid_argument", "malformed request field", e.what());
  } catch (const std::bad_alloc&) {
    return error_response(500, "internal", "out of memory", "");
  } catch (const std::exception& e) {
    return error_response(500, "internal", "internal error", e.what());
  }
}

}  // namespace dockscope::service
