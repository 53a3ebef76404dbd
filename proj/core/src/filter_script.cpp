// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "dockscope/filter_script.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dockscope/error.hpp"
#include "dockscope/naming.hpp"

namespace dockscope {

namespace {

[[noreturn]] void script_error(int line, const std::string& msg, const std::string& detail = {}) {
  fail(ErrorCode::script, "line " + std::to_string(line) + ": " + msg, detail);
}

double parse_bound(std::string_view s, int line) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::string_view body = s;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size() || std::isnan(v))
    script_error(line, "malformed bound '" + std::string(s) + "'");
  return v;
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Parses "<property> <min> <max> [of <protein> [<protein>]]" from tokens[at..].
PropertyRange parse_range(Level level, const std::vector<std::string>& t, std::size_t at, int line,
                          const ComplexEnsemble& ens) {
  if (t.size() < at + 3) script_error(line, "expected <property> <min> <max>");
  PropertyRange r;
  r.level = level;
  r.property = t[at];
  r.min = parse_bound(t[at + 1], line);
  r.max = parse_bound(t[at + 2], line);
  if (r.min > r.max) script_error(line, "range minimum exceeds maximum");
  std::size_t i = at + 3;
  if (i == t.size()) return r;
  if (t[i] != "of") script_error(line, "unexpected '" + t[i] + "'");
  const std::size_t rest = t.size() - i - 1;
  if (rest == 1) r.protein = parse_protein(ens, t[i + 1]);
  else if (rest == 2) r.pair = parse_pair(ens, t[i + 1], t[i + 2]);
  else script_error(line, "'of' takes one protein or a protein pair");
  return r;
}

SubjectSpec parse_selector(Level level, const std::vector<std::string>& t, std::size_t at, int line,
                           const ComplexEnsemble& ens) {
  const std::size_t n = t.size() - at;
  if (n == 0) script_error(line, "missing selector");
  if (t[at] == "where") return parse_range(level, t, at + 1, line, ens);
  switch (level) {
    case Level::cc: {
      CcIds s;
      for (std::size_t i = at; i < t.size(); ++i) s.ids.push_back(parse_cc(ens, t[i]));
      return s;
    }
    case Level::ppe: {
      if (n % 2) script_error(line, "ppe selectors come in protein pairs");
      PairContact s;
      for (std::size_t i = at; i < t.size(); i += 2) s.pairs.push_back(parse_pair(ens, t[i], t[i + 1]));
      return s;
    }
    case Level::ppc: {
      if (n % 3) script_error(line, "ppc selectors are <cc> <protein> <protein> triples");
      PpcIds s;
      for (std::size_t i = at; i < t.size(); i += 3) {
        CcIndex cc = parse_cc(ens, t[i]);
        ProteinPair pair = parse_pair(ens, t[i + 1], t[i + 2]);
        auto ppc = ens.find_ppc(cc, pair);
        if (!ppc)
          fail(ErrorCode::not_found, "proteins " + t[i + 1] + " and " + t[i + 2] + " are not in contact in " + t[i]);
        s.ids.push_back(*ppc);
      }
      return s;
    }
    case Level::aap: {
      if (n % 2) script_error(line, "aap selectors come in amino acid pairs");
      AapKeys s;
      for (std::size_t i = at; i < t.size(); i += 2)
        s.keys.push_back(make_aap_key(parse_aa(ens, t[i]), parse_aa(ens, t[i + 1])));
      return s;
    }
    case Level::aa: {
      AminoAcids s;
      for (std::size_t i = at; i < t.size(); ++i) s.ids.push_back(parse_aa(ens, t[i]));
      return s;
    }
  }
  script_error(line, "unknown level");
}

std::string range_suffix(const PropertyRange& r, const ComplexEnsemble& ens) {
  std::string out = r.property + " " + format_bound(r.min) + " " + format_bound(r.max);
  if (r.pair) out += " of " + format_pair(ens, *r.pair);
  else if (r.protein) out += " of " + ens.proteins()[*r.protein].name;
  return out;
}

}  // namespace

std::vector<FilterStatement> parse_filter_script(std::string_view text, const ComplexEnsemble& ens) {
  std::vector<FilterStatement> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream words(raw);
    std::vector<std::string> t;
    for (std::string w; words >> w;) t.push_back(w);
    if (t.empty()) continue;

    FilterStatement st;
    st.line = line;
    std::size_t at = 0;
    if (t[0] == "disabled") {
      st.enabled = false;
      ++at;
    }
    if (t.size() < at + 2) script_error(line, "expected <kind> <level> <selector>");
    auto kind = parse_filter_kind(t[at]);
    if (!kind) script_error(line, "unknown filter kind '" + t[at] + "'");
    auto level = parse_level(t[at + 1]);
    if (!level) script_error(line, "unknown level '" + t[at + 1] + "'");
    st.kind = *kind;
    try {
      st.subject = *kind == FilterKind::range ? SubjectSpec(parse_range(*level, t, at + 2, line, ens))
                                              : parse_selector(*level, t, at + 2, line, ens);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::script) throw;
      script_error(line, e.what(), e.detail());
    }
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<int> apply_filter_script(FilterQueue& queue, const ResolveContext& ctx,
                                     const std::vector<FilterStatement>& statements) {
  std::vector<int> ids;
  for (const auto& st : statements) {
    try {
      ids.push_back(add_filter(queue, ctx, st.kind, st.subject, st.enabled));
    } catch (const Error& e) {
      script_error(st.line, e.what(), e.detail());
    }
  }
  return ids;
}

std::string format_statement(FilterKind kind, const SubjectSpec& subject, bool enabled, const ComplexEnsemble& ens) {
  std::string out = enabled ? "" : "disabled ";
  out += std::string(to_string(kind)) + " " + std::string(to_string(level_of(subject)));
  const auto& confs = ens.configurations();
  if (const auto* r = std::get_if<PropertyRange>(&subject)) {
    out += kind == FilterKind::range ? " " : " where ";
    return out + range_suffix(*r, ens);
  }
  if (const auto* s = std::get_if<CcIds>(&subject))
    for (auto id : s->ids) out += " " + confs[id].id;
  if (const auto* s = std::get_if<PairContact>(&subject))
    for (auto p : s->pairs) out += " " + format_pair(ens, p);
  if (const auto* s = std::get_if<PpcIds>(&subject))
    for (auto id : s->ids) {
      const Ppc& ppc = ens.ppcs()[id];
      out += " " + confs[ppc.cc].id + " " + format_pair(ens, ens.ppes()[ppc.ppe].pair);
    }
  if (const auto* s = std::get_if<AapKeys>(&subject))
    for (const auto& k : s->keys) out += " " + format_aap(ens, k);
  if (const auto* s = std::get_if<AminoAcids>(&subject))
    for (auto aa : s->ids) out += " " + format_aa(ens, aa);
  return out;
}

std::string format_filter_script(const FilterQueue& queue, const ComplexEnsemble& ens) {
  std::string out;
  for (const auto& r : queue.records()) out += format_statement(r.kind, r.subject, r.enabled, ens) + "\n";
  return out;
}

}  // namespace dockscope
