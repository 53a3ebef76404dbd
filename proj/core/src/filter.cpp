// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/filter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dockscope/error.hpp"
#include "dockscope/naming.hpp"

namespace dockscope {

std::string_view to_string(FilterKind k) {
  switch (k) {
    case FilterKind::remove: return "remove";
    case FilterKind::remove_complement: return "remove_complement";
    case FilterKind::fix: return "fix";
    case FilterKind::add: return "add";
    case FilterKind::range: return "range";
  }
  return "remove";
}

std::string_view to_string(Level l) {
  switch (l) {
    case Level::cc: return "cc";
    case Level::ppe: return "ppe";
    case Level::ppc: return "ppc";
    case Level::aap: return "aap";
    case Level::aa: return "aa";
  }
  return "cc";
}

std::optional<FilterKind> parse_filter_kind(std::string_view s) {
  for (auto k : {FilterKind::remove, FilterKind::remove_complement, FilterKind::fix, FilterKind::add,
                 FilterKind::range})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::optional<Level> parse_level(std::string_view s) {
  for (auto l : {Level::cc, Level::ppe, Level::ppc, Level::aap, Level::aa})
    if (to_string(l) == s) return l;
  return std::nullopt;
}

std::string_view to_string(CellMark m) {
  switch (m) {
    case CellMark::normal: return "normal";
    case CellMark::partially_affected: return "partial";
    case CellMark::fully_affected: return "full";
  }
  return "normal";
}

Level level_of(const SubjectSpec& spec) {
  struct {
    Level operator()(const CcIds&) const { return Level::cc; }
    Level operator()(const PairContact&) const { return Level::ppe; }
    Level operator()(const PpcIds&) const { return Level::ppc; }
    Level operator()(const AapKeys&) const { return Level::aap; }
    Level operator()(const AminoAcids&) const { return Level::aa; }
    Level operator()(const PropertyRange& r) const { return r.level; }
  } visitor;
  return std::visit(visitor, spec);
}

namespace {

bool in_range(double v, const PropertyRange& r) { return v >= r.min && v <= r.max; }

[[noreturn]] void unknown(const std::string& what, const std::vector<std::string>& ids) {
  std::string list;
  for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
  fail(ErrorCode::not_found, "unknown " + what + ": " + list, list);
}

double charge_value(Charge c) {
  return c == Charge::positive ? 1.0 : c == Charge::negative ? -1.0 : 0.0;
}

CcSet resolve_range(const PropertyRange& r, const ResolveContext& ctx) {
  const ComplexEnsemble& ens = ctx.ensemble;
  const std::size_t n = ens.cc_count();
  CcSet out(n);
  if (r.min > r.max) fail(ErrorCode::invalid_argument, "range minimum exceeds maximum");
  if (std::isnan(r.min) || std::isnan(r.max)) fail(ErrorCode::invalid_argument, "range bound is NaN");

  switch (r.level) {
    case Level::cc: {
      const std::vector<std::optional<double>>* column = nullptr;
      std::vector<std::optional<double>> tmp;
      if (auto idx = ens.find_property(r.property)) {
        tmp.reserve(n);
        for (const auto& cfg : ens.configurations()) tmp.push_back(cfg.properties[*idx]);
        column = &tmp;
      } else if (ctx.extra_columns) {
        auto it = ctx.extra_columns->find(r.property);
        if (it != ctx.extra_columns->end()) column = &it->second;
      }
      if (!column) unknown("configuration property", {r.property});
      for (std::size_t cc = 0; cc < n && cc < column->size(); ++cc)
        if ((*column)[cc] && in_range(*(*column)[cc], r)) out.set(cc);
      return out;
    }
    case Level::ppc: {
      bool known = r.property == "n_aap";
      for (const Ppc& ppc : ens.ppcs()) {
        if (r.pair && ens.ppes()[ppc.ppe].pair != *r.pair) continue;
        std::optional<double> v;
        if (r.property == "n_aap") {
          v = static_cast<double>(ppc.contacts.size());
        } else if (auto it = ppc.scores.find(r.property); it != ppc.scores.end()) {
          v = it->second;
          known = true;
        }
        if (v && in_range(*v, r)) out.set(ppc.cc);
      }
      if (!known) unknown("pair configuration property", {r.property});
      return out;
    }
    case Level::aap: {
      if (r.property == "frequency") {
        for (const AapRecord& rec : ens.aaps()) {
          if (r.pair && rec.key.pair() != *r.pair) continue;
          double f = n == 0 ? 0.0 : static_cast<double>(rec.ccs.count()) / static_cast<double>(n);
          if (in_range(f, r)) out |= rec.ccs;
        }
      } else if (r.property == "min_distance") {
        for (const Ppc& ppc : ens.ppcs()) {
          if (r.pair && ens.ppes()[ppc.ppe].pair != *r.pair) continue;
          for (const auto& inst : ppc.contacts)
            if (in_range(inst.min_distance, r)) {
              out.set(ppc.cc);
              break;
            }
        }
      } else {
        unknown("amino acid pair property", {r.property});
      }
      return out;
    }
    case Level::aa: {
      if (r.property != "hydrophobicity" && r.property != "charge" && r.property != "frequency")
        unknown("amino acid property", {r.property});
      for (std::size_t p = 0; p < ens.proteins().size(); ++p) {
        if (r.protein && *r.protein != p) continue;
        for (std::uint32_t res = 0; res < ens.proteins()[p].residues.size(); ++res) {
          AminoAcidId aa{static_cast<ProteinIndex>(p), res};
          CcSet with = ens.ccs_with_aa(aa);
          double v = 0;
          if (r.property == "hydrophobicity") v = ens.hydrophobicity(aa);
          else if (r.property == "charge") v = charge_value(ens.charge(aa));
          else v = n == 0 ? 0.0 : static_cast<double>(with.count()) / static_cast<double>(n);
          if (in_range(v, r)) out |= with;
        }
      }
      return out;
    }
    case Level::ppe:
      break;
  }
  fail(ErrorCode::invalid_argument, "range filters are not defined on protein pair ensembles");
}

}  // namespace

CcSet resolve_subject(const SubjectSpec& spec, const ResolveContext& ctx) {
  const ComplexEnsemble& ens = ctx.ensemble;
  const std::size_t n = ens.cc_count();
  CcSet out(n);
  if (const auto* s = std::get_if<CcIds>(&spec)) {
    std::vector<std::string> bad;
    for (CcIndex c : s->ids) {
      if (c >= n) bad.push_back("#" + std::to_string(c));
      else out.set(c);
    }
    if (!bad.empty()) unknown("configurations", bad);
  } else if (const auto* s = std::get_if<PairContact>(&spec)) {
    std::vector<std::string> bad;
    for (const auto& pair : s->pairs) {
      auto ppe = pair.second < ens.proteins().size() ? ens.find_ppe(pair) : std::nullopt;
      if (!ppe) {
        bad.push_back(pair.second < ens.proteins().size() ? format_pair(ens, pair) : "?");
        continue;
      }
      out |= ens.ppes()[*ppe].ccs;
    }
    if (!bad.empty()) unknown("protein pairs (never in contact)", bad);
  } else if (const auto* s = std::get_if<PpcIds>(&spec)) {
    std::vector<std::string> bad;
    for (PpcIndex i : s->ids) {
      if (i >= ens.ppcs().size()) bad.push_back("#" + std::to_string(i));
      else out.set(ens.ppcs()[i].cc);
    }
    if (!bad.empty()) unknown("pair configurations", bad);
  } else if (const auto* s = std::get_if<AapKeys>(&spec)) {
    std::vector<std::string> bad;
    for (const auto& key : s->keys) {
      auto a = ens.find_aap(key);
      if (!a) {
        bool named = key.second.protein < ens.proteins().size() &&
                     key.first.residue < ens.proteins()[key.first.protein].residues.size() &&
                     key.second.residue < ens.proteins()[key.second.protein].residues.size();
        bad.push_back(named ? format_aap(ens, key) : "?");
        continue;
      }
      out |= ens.aaps()[*a].ccs;
    }
    if (!bad.empty()) unknown("amino acid pairs (never in contact)", bad);
  } else if (const auto* s = std::get_if<AminoAcids>(&spec)) {
    std::vector<std::string> bad;
    for (const auto& aa : s->ids) {
      if (aa.protein >= ens.proteins().size() || aa.residue >= ens.proteins()[aa.protein].residues.size()) {
        bad.push_back("?");
        continue;
      }
      out |= ens.ccs_with_aa(aa);
    }
    if (!bad.empty()) unknown("amino acids", bad);
  } else {
    out = resolve_range(std::get<PropertyRange>(spec), ctx);
  }
  return out;
}

namespace {

std::string format_bound(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

template <typename T, typename F>
std::string list_or_count(const std::vector<T>& items, const char* noun, F&& fmt) {
  if (items.size() == 1) return fmt(items.front());
  if (items.size() <= 3) {
    std::string out;
    for (const auto& x : items) out += (out.empty() ? "" : ", ") + fmt(x);
    return out;
  }
  return std::to_string(items.size()) + " selected " + noun;
}

}  // namespace

std::string describe_filter(FilterKind kind, const SubjectSpec& spec, const ComplexEnsemble& ens,
                            std::size_t member_count) {
  std::string subject;
  if (const auto* s = std::get_if<CcIds>(&spec)) {
    subject = s->ids.size() == 1 ? "CC " + ens.configurations()[s->ids[0]].id
                                 : std::to_string(s->ids.size()) + " selected CCs";
  } else if (const auto* s = std::get_if<PairContact>(&spec)) {
    subject = "contact " + list_or_count(s->pairs, "protein pairs", [&](const ProteinPair& p) {
                return ens.proteins()[p.first].name + "-" + ens.proteins()[p.second].name;
              });
  } else if (const auto* s = std::get_if<PpcIds>(&spec)) {
    subject = "PPC " + list_or_count(s->ids, "PPCs", [&](PpcIndex i) {
                const Ppc& ppc = ens.ppcs()[i];
                const auto& pair = ens.ppes()[ppc.ppe].pair;
                return ens.configurations()[ppc.cc].id + "/" + ens.proteins()[pair.first].name + "-" +
                       ens.proteins()[pair.second].name;
              });
  } else if (const auto* s = std::get_if<AapKeys>(&spec)) {
    subject = "AAP " + list_or_count(s->keys, "AAPs", [&](const AapKey& k) {
                return format_aa(ens, k.first) + "-" + format_aa(ens, k.second);
              });
  } else if (const auto* s = std::get_if<AminoAcids>(&spec)) {
    subject = "AA " + list_or_count(s->ids, "AAs", [&](const AminoAcidId& a) { return format_aa(ens, a); });
  } else {
    const auto& r = std::get<PropertyRange>(spec);
    subject = std::string(to_string(r.level)) + " " + r.property + " in [" + format_bound(r.min) + ", " +
              format_bound(r.max) + "]";
    if (r.protein) subject += " of " + ens.proteins()[*r.protein].name;
    if (r.pair) subject += " of " + ens.proteins()[r.pair->first].name + "-" + ens.proteins()[r.pair->second].name;
  }
  return std::string(to_string(kind)) + ": " + subject + " (" + std::to_string(member_count) + " CCs)";
}

const FilterRecord& FilterQueue::get(int id) const {
  for (const auto& r : records_)
    if (r.id == id) return r;
  fail(ErrorCode::not_found, "unknown filter id " + std::to_string(id), std::to_string(id));
}

FilterRecord& FilterQueue::find(int id) { return const_cast<FilterRecord&>(std::as_const(*this).get(id)); }

int FilterQueue::append(FilterKind kind, SubjectSpec subject, CcSet members, std::string label, bool enabled) {
  if (kind == FilterKind::range && !std::holds_alternative<PropertyRange>(subject))
    fail(ErrorCode::invalid_argument, "range filters need a property range subject");
  if (members.size() != cc_count_) fail(ErrorCode::internal, "filter members sized for another ensemble");
  FilterRecord r;
  r.id = next_id_++;
  r.kind = kind;
  r.subject = std::move(subject);
  r.enabled = enabled;
  r.created_order = next_order_++;
  r.label = std::move(label);
  r.members = std::move(members);
  records_.push_back(std::move(r));
  return records_.back().id;
}

void FilterQueue::set_enabled(int id, bool enabled) { find(id).enabled = enabled; }

void FilterQueue::update_range(int id, PropertyRange range, CcSet members, std::string label) {
  auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.id == id; });
  if (it == records_.end()) fail(ErrorCode::not_found, "unknown filter id " + std::to_string(id), std::to_string(id));
  if (it->kind != FilterKind::range)
    fail(ErrorCode::invalid_argument, "filter " + std::to_string(id) + " is not a range filter");
  FilterRecord r = std::move(*it);
  records_.erase(it);
  r.subject = std::move(range);
  r.members = std::move(members);
  r.label = std::move(label);
  records_.push_back(std::move(r));
}

void FilterQueue::remove(int id) {
  auto it = std::find_if(records_.begin(), records_.end(), [&](const auto& r) { return r.id == id; });
  if (it == records_.end()) fail(ErrorCode::not_found, "unknown filter id " + std::to_string(id), std::to_string(id));
  records_.erase(it);
}

void FilterQueue::clear() { records_.clear(); }

int add_filter(FilterQueue& queue, const ResolveContext& ctx, FilterKind kind, SubjectSpec spec, bool enabled) {
  if (kind == FilterKind::range && !std::holds_alternative<PropertyRange>(spec))
    fail(ErrorCode::invalid_argument, "range filters need a property range subject");
  CcSet members = resolve_subject(spec, ctx);
  std::string label = describe_filter(kind, spec, ctx.ensemble, members.count());
  return queue.append(kind, std::move(spec), std::move(members), std::move(label), enabled);
}

void set_range(FilterQueue& queue, const ResolveContext& ctx, int id, double min, double max) {
  const FilterRecord& rec = queue.get(id);
  if (rec.kind != FilterKind::range)
    fail(ErrorCode::invalid_argument, "filter " + std::to_string(id) + " is not a range filter");
  if (min > max) fail(ErrorCode::invalid_argument, "range minimum exceeds maximum");
  PropertyRange range = std::get<PropertyRange>(rec.subject);
  range.min = min;
  range.max = max;
  CcSet members = resolve_subject(range, ctx);
  std::string label = describe_filter(FilterKind::range, range, ctx.ensemble, members.count());
  queue.update_range(id, std::move(range), std::move(members), std::move(label));
}

CcSet evaluate_visible(const std::vector<FilterRecord>& records, std::size_t cc_count) {
  CcSet visible = full_cc_set(cc_count);
  CcSet fixed(cc_count);
  for (const auto& r : records) {
    if (!r.enabled) continue;
    switch (r.kind) {
      case FilterKind::remove: visible -= r.members; break;
      case FilterKind::remove_complement:
      case FilterKind::range: visible &= r.members; break;
      case FilterKind::add: visible |= r.members; break;
      case FilterKind::fix: fixed |= r.members; break;
    }
  }
  visible |= fixed;
  return visible;
}

std::vector<int> VisibilityState::filters_affecting(CcIndex cc) const {
  std::vector<int> out;
  for (const auto& [id, set] : affected_by_disabled)
    if (set.test(cc)) out.push_back(id);
  return out;
}

VisibilityState evaluate(const FilterQueue& queue) {
  const std::size_t n = queue.cc_count();
  VisibilityState state;
  state.visible = evaluate_visible(queue.records(), n);
  state.hidden = ~state.visible;
  state.affected = CcSet(n);
  std::vector<FilterRecord> trial = queue.records();
  for (std::size_t i = 0; i < trial.size(); ++i) {
    if (trial[i].enabled) continue;
    trial[i].enabled = true;
    CcSet with = evaluate_visible(trial, n);
    trial[i].enabled = false;
    CcSet affected = state.visible - with;
    state.affected |= affected;
    state.affected_by_disabled.emplace(trial[i].id, std::move(affected));
  }
  return state;
}

CellMark classify_cell(const CcSet& support, const CcSet& affected) {
  const std::size_t total = support.count();
  if (total == 0) return CellMark::normal;
  const std::size_t hit = (support & affected).count();
  if (hit == 0) return CellMark::normal;
  return hit == total ? CellMark::fully_affected : CellMark::partially_affected;
}

std::vector<CellMark> cell_marks(const ComplexEnsemble& ens, const ResidueMatrixModel& model,
                                 const CcSet& visible, const CcSet& affected) {
  std::vector<CellMark> marks;
  marks.reserve(model.cells.size());
  for (const auto& cell : model.cells) marks.push_back(classify_cell(ens.aaps()[cell.aap].ccs & visible, affected));
  return marks;
}

ProteinViewMarks cell_marks(const ComplexEnsemble& ens, const ProteinViewModel& model, const CcSet& visible,
                            const CcSet& affected) {
  const std::size_t n_res = model.totals.size();
  const std::size_t n = ens.cc_count();
  std::vector<CcSet> total_support(n_res, CcSet(n));
  ProteinViewMarks marks;
  for (const auto& row : model.partners) {
    std::vector<CcSet> support(n_res, CcSet(n));
    auto ppe = ens.find_ppe(ProteinPair::of(model.primary, row.partner));
    if (ppe) {
      const bool primary_first = ens.ppes()[*ppe].pair.first == model.primary;
      for (AapIndex a : ens.ppes()[*ppe].aaps) {
        const AapRecord& rec = ens.aaps()[a];
        std::uint32_t r = primary_first ? rec.key.first.residue : rec.key.second.residue;
        support[r] |= rec.ccs & visible;
      }
    }
    std::vector<CellMark> row_marks(n_res);
    for (std::size_t r = 0; r < n_res; ++r) {
      row_marks[r] = classify_cell(support[r], affected);
      total_support[r] |= support[r];
    }
    marks.partners.push_back(std::move(row_marks));
  }
  marks.totals.resize(n_res);
  for (std::size_t r = 0; r < n_res; ++r) marks.totals[r] = classify_cell(total_support[r], affected);
  return marks;
}

}  // namespace dockscope
