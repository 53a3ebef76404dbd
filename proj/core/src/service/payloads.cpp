// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/service/payloads.hpp"

#include <cmath>
#include <limits>

#include "dockscope/amino_acids.hpp"
#include "dockscope/error.hpp"
#include "dockscope/naming.hpp"

namespace dockscope::payload {

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json bound(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

std::string_view to_string_mark(CellMark m) { return dockscope::to_string(m); }

json residue_entry(const ComplexEnsemble& ens, ProteinIndex p, std::uint32_t r) {
  const Residue& res = ens.proteins()[p].residues[r];
  const AminoAcidId aa{p, r};
  json j{{"index", r}, {"seq", res.seq}, {"name", res.name}, {"label", format_aa(ens, aa)}};
  if (res.icode != ' ') j["icode"] = std::string(1, res.icode);
  j["hydrophobicity"] = ens.hydrophobicity(aa);
  j["charge"] = dockscope::to_string(ens.charge(aa));
  return j;
}

const json& require(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) fail(ErrorCode::invalid_argument, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_of(const json& j, const char* what) {
  if (!j.is_string()) fail(ErrorCode::invalid_argument, std::string(what) + " must be a string");
  return j.get<std::string>();
}

ProteinPair pair_of(const json& j, const ComplexEnsemble& ens) {
  if (!j.is_array() || j.size() != 2) fail(ErrorCode::invalid_argument, "a protein pair is a two-element array");
  return parse_pair(ens, string_of(j[0], "protein"), string_of(j[1], "protein"));
}

double bound_of(const json& body, const char* key, double fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  if (!it->is_number()) fail(ErrorCode::invalid_argument, std::string(key) + " must be a number or null");
  return it->get<double>();
}

}  // namespace

json protein_list(const ComplexEnsemble& ens) {
  json out = json::array();
  for (std::size_t p = 0; p < ens.proteins().size(); ++p) {
    const auto& info = ens.proteins()[p];
    out.push_back({{"index", p},
                   {"name", info.name},
                   {"chain", std::string(1, info.chain)},
                   {"color", info.color},
                   {"residues", info.residues.size()}});
  }
  return out;
}

json residue(const ComplexEnsemble& ens, AminoAcidId aa) { return residue_entry(ens, aa.protein, aa.residue); }

json pair(const ComplexEnsemble& ens, ProteinPair p) {
  return json::array({ens.proteins()[p.first].name, ens.proteins()[p.second].name});
}

json status(const ComplexEnsemble& ens, const FilterQueue& queue, const VisibilityState& vis) {
  std::size_t ppc_visible = 0;
  for (const auto& ppe : ens.ppes()) ppc_visible += (ppe.ccs & vis.visible).count();
  std::size_t enabled = 0;
  for (const auto& r : queue.records()) enabled += r.enabled;
  return {{"ccs_total", ens.cc_count()},
          {"ccs_visible", vis.visible.count()},
          {"ccs_filtered", vis.hidden.count()},
          {"ccs_affected", vis.affected.count()},
          {"ppcs_total", ens.ppcs().size()},
          {"ppcs_visible", ppc_visible},
          {"filters", queue.records().size()},
          {"filters_enabled", enabled}};
}

json filter_list(const ComplexEnsemble& ens, const FilterQueue& queue, const VisibilityState& vis) {
  json out = json::array();
  for (const auto& r : queue.records()) {
    json j{{"id", r.id},
           {"kind", dockscope::to_string(r.kind)},
           {"level", dockscope::to_string(level_of(r.subject))},
           {"label", r.label},
           {"enabled", r.enabled},
           {"created_order", r.created_order},
           {"subject_ccs", r.members.count()},
           {"statement", format_statement(r.kind, r.subject, r.enabled, ens)}};
    if (const auto* range = std::get_if<PropertyRange>(&r.subject)) {
      j["property"] = range->property;
      j["min"] = bound(range->min);
      j["max"] = bound(range->max);
    }
    if (auto it = vis.affected_by_disabled.find(r.id); it != vis.affected_by_disabled.end())
      j["affected_ccs"] = it->second.count();
    out.push_back(std::move(j));
  }
  return out;
}

json visible_ids(const ComplexEnsemble& ens, const CcSet& visible) {
  json out = json::array();
  for (auto cc : to_indices(visible)) out.push_back(ens.configurations()[cc].id);
  return out;
}

json aggregates(const ComplexEnsemble& ens, const CcSet& visible) {
  json out = json::array();
  for (PpeIndex i = 0; i < ens.ppes().size(); ++i) {
    const auto agg = ppe_aggregate(ens, i, visible);
    json presence = json::array();
    for (const auto& [aap, frac] : agg.presence)
      presence.push_back({{"aap", format_aap(ens, ens.aaps()[aap].key)}, {"fraction", frac}});
    out.push_back({{"pair", pair(ens, ens.ppes()[i].pair)},
                   {"ppcs", agg.n_ppcs},
                   {"n_aap", agg.n_unique_aap},
                   {"consistency", optional_number(agg.consistency)},
                   {"presence", std::move(presence)}});
  }
  return out;
}

json overview(const ComplexEnsemble& ens, const VisibilityState& vis, BarScaling scaling) {
  const auto model = overview_model(ens, vis.visible, scaling);
  json nodes = json::array();
  for (const auto& n : model.nodes) {
    json bars = json::array();
    for (const auto& b : n.bars)
      bars.push_back({{"partner", ens.proteins()[b.partner].name},
                      {"interface_size", b.interface_size},
                      {"total_interface_size", b.total_interface_size},
                      {"height", b.height},
                      {"consistency", optional_number(b.consistency)},
                      {"consistency_reference", 1.0}});
    const auto& info = ens.proteins()[n.protein];
    nodes.push_back({{"protein", info.name}, {"color", info.color}, {"bars", std::move(bars)}});
  }
  json edges = json::array();
  for (const auto& e : model.edges) {
    const auto& ppe = ens.ppes()[e.ppe];
    edges.push_back({{"pair", pair(ens, e.pair)},
                     {"visible_weight", e.visible_weight},
                     {"total_weight", e.total_weight},
                     {"affected_weight", (ppe.ccs & vis.affected).count()}});
  }
  return {{"scaling", to_string(scaling)}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

json properties(const ComplexEnsemble& ens, const VisibilityState& vis, const PropertyColumns& extra,
                const LevelItems& selected) {
  json names = ens.property_names();
  for (const auto& [name, _] : extra) names.push_back(name);
  json rows = json::array();
  for (CcIndex cc = 0; cc < ens.cc_count(); ++cc) {
    const auto& conf = ens.configurations()[cc];
    json values = json::array();
    for (const auto& v : conf.properties) values.push_back(optional_number(v));
    for (const auto& [_, col] : extra) values.push_back(optional_number(col[cc]));
    json row{{"id", conf.id},
             {"values", std::move(values)},
             {"visible", vis.visible.test(cc)},
             {"affected", vis.affected.test(cc)},
             {"selected", selected.ccs.size() == ens.cc_count() && selected.ccs.test(cc)}};
    rows.push_back(std::move(row));
  }
  return {{"names", std::move(names)}, {"ccs", std::move(rows)}};
}

json protein_view(const ComplexEnsemble& ens, const ProteinViewModel& model, const VisibilityState& vis) {
  const auto marks = cell_marks(ens, model, vis.visible, vis.affected);
  const ProteinIndex p = model.primary;
  json residues = json::array();
  for (std::uint32_t r = 0; r < model.totals.size(); ++r) residues.push_back(residue_entry(ens, p, r));
  auto mark_array = [](const std::vector<CellMark>& m) {
    json a = json::array();
    for (auto x : m) a.push_back(to_string_mark(x));
    return a;
  };
  json partners = json::array();
  for (std::size_t i = 0; i < model.partners.size(); ++i)
    partners.push_back({{"partner", ens.proteins()[model.partners[i].partner].name},
                        {"counts", model.partners[i].counts},
                        {"marks", mark_array(marks.partners[i])}});
  json columns = json::array();
  for (const auto& c : model.columns)
    columns.push_back({{"gap", c.gap}, {"residue", c.residue}, {"length", c.length}});
  return {{"protein", ens.proteins()[p].name},
          {"condensed", model.condensed},
          {"residues", std::move(residues)},
          {"totals", model.totals},
          {"total_marks", mark_array(marks.totals)},
          {"partners", std::move(partners)},
          {"columns", std::move(columns)},
          {"ruler", model.ruler}};
}

json residue_matrix(const ComplexEnsemble& ens, const ResidueMatrixModel& model, const VisibilityState& vis) {
  const auto marks = cell_marks(ens, model, vis.visible, vis.affected);
  auto axis = [&](const MatrixAxis& a) {
    json res = json::array();
    for (auto r : a.residues) res.push_back(residue_entry(ens, a.protein, r));
    return json{{"protein", ens.proteins()[a.protein].name}, {"residues", std::move(res)}, {"frequency", a.frequency}};
  };
  json cells = json::array();
  for (std::size_t i = 0; i < model.cells.size(); ++i) {
    const auto& c = model.cells[i];
    cells.push_back({{"aap", format_aap(ens, ens.aaps()[c.aap].key)},
                     {"row", c.row},
                     {"col", c.col},
                     {"count", c.count},
                     {"mark", to_string_mark(marks[i])}});
  }
  return {{"pair", pair(ens, ens.ppes()[model.ppe].pair)},
          {"sort", to_string(model.sort)},
          {"rows", axis(model.rows)},
          {"cols", axis(model.cols)},
          {"cells", std::move(cells)}};
}

json contact_lists(const ComplexEnsemble& ens, const ContactListModel& model) {
  const auto& confs = ens.configurations();
  json entries = json::array();
  const ProteinIndex side[2] = {model.pair.first, model.pair.second};
  for (const auto& e : model.entries) {
    json aaps = json::array();
    for (std::size_t i = 0; i < e.aaps.size(); ++i)
      aaps.push_back({{"aap", format_aap(ens, ens.aaps()[e.aaps[i]].key)}, {"shared", e.aap_shared[i]}});
    json lists = json::array();
    for (int s = 0; s < 2; ++s) {
      json res = json::array();
      for (std::size_t i = 0; i < e.residues[s].size(); ++i) {
        json r = residue_entry(ens, side[s], e.residues[s][i]);
        r["shared"] = static_cast<bool>(e.residue_shared[s][i]);
        res.push_back(std::move(r));
      }
      json missing = json::array();
      for (auto r : e.missing[s]) missing.push_back(format_aa(ens, {side[s], r}));
      lists.push_back({{"protein", ens.proteins()[side[s]].name}, {"residues", std::move(res)},
                       {"missing", std::move(missing)}});
    }
    entries.push_back({{"cc", confs[ens.ppcs()[e.ppc].cc].id},
                       {"similarity", optional_number(e.similarity)},
                       {"aaps", std::move(aaps)},
                       {"sides", std::move(lists)}});
  }
  json ref = model.reference ? json(confs[ens.ppcs()[*model.reference].cc].id) : json(nullptr);
  return {{"pair", pair(ens, model.pair)}, {"reference", ref}, {"entries", std::move(entries)}};
}

json similarity_ranking(const ComplexEnsemble& ens, const std::vector<ScoredItem>& ranking) {
  json out = json::array();
  for (const auto& item : ranking)
    out.push_back({{"cc", ens.configurations()[item.index].id}, {"score", optional_number(item.score)}});
  return out;
}

json selection(const ComplexEnsemble& ens, const Selection& sel) {
  auto items = [&](const LevelItems& it) {
    json ppes = json::array(), ppcs = json::array(), aaps = json::array(), aas = json::array();
    for (auto i : it.ppes) ppes.push_back(pair(ens, ens.ppes()[i].pair));
    for (auto i : it.ppcs) {
      const auto& ppc = ens.ppcs()[i];
      ppcs.push_back({{"cc", ens.configurations()[ppc.cc].id}, {"pair", pair(ens, ens.ppes()[ppc.ppe].pair)}});
    }
    for (auto i : it.aaps) {
      const auto& key = ens.aaps()[i].key;
      aaps.push_back(json::array({format_aa(ens, key.first), format_aa(ens, key.second)}));
    }
    for (auto aa : it.aas) aas.push_back(format_aa(ens, aa));
    json ccs = it.ccs.size() == ens.cc_count() ? visible_ids(ens, it.ccs) : json::array();
    return json{{"ccs", std::move(ccs)}, {"ppes", std::move(ppes)}, {"ppcs", std::move(ppcs)},
                {"aaps", std::move(aaps)}, {"aas", std::move(aas)}};
  };
  json j{{"items", items(sel.items)}, {"anchor_level", dockscope::to_string(sel.anchor_level)},
         {"anchor", items(sel.anchor)}};
  j["primary_protein"] = sel.primary_protein ? json(ens.proteins()[*sel.primary_protein].name) : json(nullptr);
  j["primary_ppe"] = sel.primary_ppe ? pair(ens, *sel.primary_ppe) : json(nullptr);
  j["primary_cc"] = sel.primary_cc ? json(ens.configurations()[*sel.primary_cc].id) : json(nullptr);
  return j;
}

json exploded(const ComplexEnsemble& ens, CcIndex cc, const ExplodedLayout& layout) {
  json proteins = json::array();
  for (std::size_t p = 0; p < layout.transforms.size(); ++p) {
    const Vec3& t = layout.transforms[p].translation;
    // Residues in contact with any partner, for contact colouring.
    std::vector<std::uint32_t> contact;
    for (auto ppc : ens.ppcs_of_cc(cc)) {
      const auto& pr = ens.ppes()[ens.ppcs()[ppc].ppe].pair;
      if (!pr.contains(static_cast<ProteinIndex>(p))) continue;
      for (const auto& inst : ens.ppcs()[ppc].contacts) {
        const auto& key = ens.aaps()[inst.aap].key;
        contact.push_back(key.first.protein == p ? key.first.residue : key.second.residue);
      }
    }
    std::sort(contact.begin(), contact.end());
    contact.erase(std::unique(contact.begin(), contact.end()), contact.end());
    json labels = json::array();
    for (auto r : contact) labels.push_back(format_aa(ens, {static_cast<ProteinIndex>(p), r}));
    proteins.push_back({{"protein", ens.proteins()[p].name},
                        {"translation", {t.x(), t.y(), t.z()}},
                        {"contact_residues", std::move(labels)}});
  }
  return {{"cc", ens.configurations()[cc].id},
          {"gap", layout.gap},
          {"converged", layout.converged},
          {"iterations", layout.iterations},
          {"min_distance", layout.min_distance},
          {"warning", layout.warning ? json(*layout.warning) : json(nullptr)},
          {"proteins", std::move(proteins)}};
}

json density_summary(const ComplexEnsemble& ens, const DensityResult& result) {
  json channels = json::array();
  for (const auto& ch : result.channels) {
    const auto& g = ch.grid;
    channels.push_back({{"channel", ens.proteins()[*ch.channel].name},
                        {"origin", {g.origin.x(), g.origin.y(), g.origin.z()}},
                        {"spacing", g.spacing},
                        {"dims", g.dims},
                        {"max", ch.max_value()}});
  }
  return {{"primary", ens.proteins()[result.primary].name},
          {"reference_cc", ens.configurations()[result.reference_cc].id},
          {"channels", std::move(channels)}};
}

FilterStatement parse_filter_request(const json& body, const ComplexEnsemble& ens) {
  if (!body.is_object()) fail(ErrorCode::invalid_argument, "filter request must be a JSON object");
  if (auto it = body.find("statement"); it != body.end()) {
    auto parsed = parse_filter_script(string_of(*it, "statement"), ens);
    if (parsed.size() != 1) fail(ErrorCode::script, "expected exactly one filter statement");
    return parsed.front();
  }
  FilterStatement st;
  auto kind = parse_filter_kind(string_of(require(body, "kind"), "kind"));
  if (!kind) fail(ErrorCode::invalid_argument, "unknown filter kind");
  // "level" may be omitted when the subject key implies it; range predicates default to cc.
  std::optional<Level> level;
  if (auto it = body.find("level"); it != body.end()) {
    level = parse_level(string_of(*it, "level"));
    if (!level) fail(ErrorCode::invalid_argument, "unknown level");
  } else {
    static const std::pair<const char*, Level> kImplied[] = {
        {"ccs", Level::cc}, {"pairs", Level::ppe}, {"ppcs", Level::ppc}, {"aaps", Level::aap}, {"aas", Level::aa}};
    for (const auto& [key, l] : kImplied)
      if (body.contains(key)) level = l;
    if (!level && body.contains("where")) level = Level::cc;
    if (!level) fail(ErrorCode::invalid_argument, "missing field 'level'");
  }
  st.kind = *kind;
  if (auto it = body.find("enabled"); it != body.end()) {
    if (!it->is_boolean()) fail(ErrorCode::invalid_argument, "enabled must be a boolean");
    st.enabled = it->get<bool>();
  }

  if (auto it = body.find("where"); it != body.end()) {
    const json& w = *it;
    PropertyRange r;
    r.level = *level;
    r.property = string_of(require(w, "property"), "property");
    r.min = bound_of(w, "min", -std::numeric_limits<double>::infinity());
    r.max = bound_of(w, "max", std::numeric_limits<double>::infinity());
    if (r.min > r.max) fail(ErrorCode::invalid_argument, "range minimum exceeds maximum");
    if (auto of = w.find("of"); of != w.end() && !of->is_null()) {
      if (!of->is_array() || of->empty() || of->size() > 2)
        fail(ErrorCode::invalid_argument, "'of' lists one protein or a protein pair");
      if (of->size() == 1) r.protein = parse_protein(ens, string_of((*of)[0], "protein"));
      else r.pair = pair_of(*of, ens);
    }
    st.subject = r;
    return st;
  }
  if (st.kind == FilterKind::range) fail(ErrorCode::invalid_argument, "range filters need a 'where' predicate");

  auto list = [&](const char* key) -> const json& {
    const json& v = require(body, key);
    if (!v.is_array() || v.empty()) fail(ErrorCode::invalid_argument, std::string(key) + " must be a nonempty array");
    return v;
  };
  switch (*level) {
    case Level::cc: {
      CcIds s;
      for (const auto& id : list("ccs")) s.ids.push_back(parse_cc(ens, string_of(id, "cc")));
      st.subject = s;
      break;
    }
    case Level::ppe: {
      PairContact s;
      for (const auto& p : list("pairs")) s.pairs.push_back(pair_of(p, ens));
      st.subject = s;
      break;
    }
    case Level::ppc: {
      PpcIds s;
      for (const auto& p : list("ppcs")) {
        CcIndex cc = parse_cc(ens, string_of(require(p, "cc"), "cc"));
        auto ppc = ens.find_ppc(cc, pair_of(require(p, "pair"), ens));
        if (!ppc) fail(ErrorCode::not_found, "the pair is not in contact in that configuration");
        s.ids.push_back(*ppc);
      }
      st.subject = s;
      break;
    }
    case Level::aap: {
      AapKeys s;
      for (const auto& p : list("aaps")) {
        if (!p.is_array() || p.size() != 2) fail(ErrorCode::invalid_argument, "an AAP is a two-element array");
        s.keys.push_back(make_aap_key(parse_aa(ens, string_of(p[0], "amino acid")),
                                      parse_aa(ens, string_of(p[1], "amino acid"))));
      }
      st.subject = s;
      break;
    }
    case Level::aa: {
      AminoAcids s;
      for (const auto& a : list("aas")) s.ids.push_back(parse_aa(ens, string_of(a, "amino acid")));
      st.subject = s;
      break;
    }
  }
  return st;
}

json filter_request(FilterKind kind, const SubjectSpec& subject, bool enabled, const ComplexEnsemble& ens) {
  json j{{"kind", dockscope::to_string(kind)}, {"level", dockscope::to_string(level_of(subject))},
         {"enabled", enabled}};
  const auto& confs = ens.configurations();
  if (const auto* r = std::get_if<PropertyRange>(&subject)) {
    json w{{"property", r->property}, {"min", bound(r->min)}, {"max", bound(r->max)}};
    if (r->pair) w["of"] = pair(ens, *r->pair);
    else if (r->protein) w["of"] = json::array({ens.proteins()[*r->protein].name});
    j["where"] = std::move(w);
  } else if (const auto* s = std::get_if<CcIds>(&subject)) {
    for (auto id : s->ids) j["ccs"].push_back(confs[id].id);
  } else if (const auto* s = std::get_if<PairContact>(&subject)) {
    for (auto p : s->pairs) j["pairs"].push_back(pair(ens, p));
  } else if (const auto* s = std::get_if<PpcIds>(&subject)) {
    for (auto id : s->ids) {
      const auto& ppc = ens.ppcs()[id];
      j["ppcs"].push_back({{"cc", confs[ppc.cc].id}, {"pair", pair(ens, ens.ppes()[ppc.ppe].pair)}});
    }
  } else if (const auto* s = std::get_if<AapKeys>(&subject)) {
    for (const auto& k : s->keys) j["aaps"].push_back(json::array({format_aa(ens, k.first), format_aa(ens, k.second)}));
  } else if (const auto* s = std::get_if<AminoAcids>(&subject)) {
    for (auto aa : s->ids) j["aas"].push_back(format_aa(ens, aa));
  }
  return j;
}

std::optional<BarScaling> parse_scaling(std::string_view s) {
  if (s == "independent") return BarScaling::independent;
  if (s == "absolute") return BarScaling::absolute;
  return std::nullopt;
}

std::optional<AxisSort> parse_sort(std::string_view s) {
  if (s == "sequence") return AxisSort::sequence;
  if (s == "frequency") return AxisSort::frequency;
  if (s == "hydrophobicity") return AxisSort::hydrophobicity;
  if (s == "charge") return AxisSort::charge;
  return std::nullopt;
}

std::string_view to_string(BarScaling s) { return s == BarScaling::independent ? "independent" : "absolute"; }

std::string_view to_string(AxisSort s) {
  switch (s) {
    case AxisSort::sequence: return "sequence";
    case AxisSort::frequency: return "frequency";
    case AxisSort::hydrophobicity: return "hydrophobicity";
    case AxisSort::charge: return "charge";
  }
  return "sequence";
}

}  // namespace dockscope::payload
