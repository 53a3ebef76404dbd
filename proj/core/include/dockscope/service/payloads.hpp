// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dockscope/density.hpp"
#include "dockscope/exploded.hpp"
#include "dockscope/filter.hpp"
#include "dockscope/filter_script.hpp"
#include "dockscope/selection.hpp"
#include "dockscope/similarity.hpp"
#include "dockscope/views.hpp"

// JSON payloads shared by the HTTP API and the CLI exports. Both interfaces
// go through these functions so their outputs can be compared byte for byte.
namespace dockscope::payload {

using nlohmann::json;

json protein_list(const ComplexEnsemble& ens);
json residue(const ComplexEnsemble& ens, AminoAcidId aa);
json pair(const ComplexEnsemble& ens, ProteinPair p);

json status(const ComplexEnsemble& ens, const FilterQueue& queue, const VisibilityState& vis);
json filter_list(const ComplexEnsemble& ens, const FilterQueue& queue, const VisibilityState& vis);
json visible_ids(const ComplexEnsemble& ens, const CcSet& visible);

/// Per-PPE N_AAP, consistency and AAP presence over the visible set.
json aggregates(const ComplexEnsemble& ens, const CcSet& visible);
json overview(const ComplexEnsemble& ens, const VisibilityState& vis, BarScaling scaling);
json properties(const ComplexEnsemble& ens, const VisibilityState& vis, const PropertyColumns& extra,
                const LevelItems& selected);
json protein_view(const ComplexEnsemble& ens, const ProteinViewModel& model, const VisibilityState& vis);
json residue_matrix(const ComplexEnsemble& ens, const ResidueMatrixModel& model, const VisibilityState& vis);
json contact_lists(const ComplexEnsemble& ens, const ContactListModel& model);
json similarity_ranking(const ComplexEnsemble& ens, const std::vector<ScoredItem>& ranking);
json selection(const ComplexEnsemble& ens, const Selection& sel);
json exploded(const ComplexEnsemble& ens, CcIndex cc, const ExplodedLayout& layout);
json density_summary(const ComplexEnsemble& ens, const DensityResult& result);

/// Statement JSON used by POST /filters:
///   {"kind": "...", "level": "...", "enabled": true, <selector>}
/// with exactly one selector: "ccs": [id], "pairs": [[A, B]],
/// "ppcs": [{"cc": id, "pair": [A, B]}], "aaps": [[aa, aa]], "aas": [aa] or
/// "where": {"property": name, "min": x|null, "max": x|null, "of": [protein...]}.
/// Range filters use "where". A "statement" string in script syntax is
/// accepted instead.
FilterStatement parse_filter_request(const json& body, const ComplexEnsemble& ens);
json filter_request(FilterKind kind, const SubjectSpec& subject, bool enabled, const ComplexEnsemble& ens);

std::optional<BarScaling> parse_scaling(std::string_view s);
std::optional<AxisSort> parse_sort(std::string_view s);
std::string_view to_string(BarScaling s);
std::string_view to_string(AxisSort s);

}  // namespace dockscope::payload
