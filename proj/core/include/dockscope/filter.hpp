// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dockscope/hierarchy.hpp"
#include "dockscope/views.hpp"

namespace dockscope {

enum class FilterKind { remove, remove_complement, fix, add, range };
enum class Level { cc, ppe, ppc, aap, aa };

std::string_view to_string(FilterKind k);
std::string_view to_string(Level l);
std::optional<FilterKind> parse_filter_kind(std::string_view s);
std::optional<Level> parse_level(std::string_view s);

// Explicit selectors, one per hierarchy level.
struct CcIds { std::vector<CcIndex> ids; };
struct PairContact { std::vector<ProteinPair> pairs; };
struct PpcIds { std::vector<PpcIndex> ids; };
struct AapKeys { std::vector<AapKey> keys; };
struct AminoAcids { std::vector<AminoAcidId> ids; };

/// Quantitative predicate. A configuration satisfies it when
///  - cc:  its property value lies in [min, max] (absent value fails);
///  - ppc: one of its PPCs (restricted to `pair` if set) has a value in range
///         (`n_aap` or a pairwise score);
///  - aap: it contains a key (of `pair` if set) whose value is in range
///         (`frequency` = ensemble-wide fraction of CCs, or `min_distance`
///         of the instance);
///  - aa:  one of the amino acids (of `protein` if set) whose value is in
///         range interacts in it (`hydrophobicity`, `charge` as +1/0/-1,
///         `frequency` = ensemble-wide fraction of CCs).
struct PropertyRange {
  Level level = Level::cc;
  std::string property;
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  std::optional<ProteinIndex> protein;
  std::optional<ProteinPair> pair;
};

using SubjectSpec = std::variant<CcIds, PairContact, PpcIds, AapKeys, AminoAcids, PropertyRange>;

Level level_of(const SubjectSpec& spec);

/// Additional per-configuration columns (e.g. similarity to the primary CC).
using PropertyColumns = std::map<std::string, std::vector<std::optional<double>>, std::less<>>;

struct ResolveContext {
  const ComplexEnsemble& ensemble;
  const PropertyColumns* extra_columns = nullptr;
};

/// Maps a subject on any level to the configurations it selects. Lower
/// levels propagate upward: an AAP selects every CC containing it, an AA
/// every CC where it interacts, a protein pair every CC where the pair is in
/// contact, a PPC its own CC. Throws Error(not_found) listing unknown ids.
CcSet resolve_subject(const SubjectSpec& spec, const ResolveContext& ctx);

/// Human-readable "kind: subject" description.
std::string describe_filter(FilterKind kind, const SubjectSpec& spec, const ComplexEnsemble& ens,
                            std::size_t member_count);

struct FilterRecord {
  int id = 0;
  FilterKind kind = FilterKind::remove;
  SubjectSpec subject;
  bool enabled = true;
  int created_order = 0;
  std::string label;
  CcSet members;  // resolved subject
};

/// Ordered filter queue. Records are kept in evaluation order; a range
/// filter moves to the end whenever its range changes. Disabled records keep
/// their slot.
class FilterQueue {
 public:
  explicit FilterQueue(std::size_t cc_count = 0) : cc_count_(cc_count) {}

  std::size_t cc_count() const { return cc_count_; }
  const std::vector<FilterRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  const FilterRecord& get(int id) const;
  int append(FilterKind kind, SubjectSpec subject, CcSet members, std::string label, bool enabled = true);
  void set_enabled(int id, bool enabled);
  /// Replaces a range filter's bounds and moves it to the end of the queue.
  void update_range(int id, PropertyRange range, CcSet members, std::string label);
  void remove(int id);
  void clear();

 private:
  FilterRecord& find(int id);

  std::size_t cc_count_;
  std::vector<FilterRecord> records_;
  int next_id_ = 1;
  int next_order_ = 0;
};

/// Resolves `spec`, appends a record with an auto-generated label and returns its id.
int add_filter(FilterQueue& queue, const ResolveContext& ctx, FilterKind kind, SubjectSpec spec,
               bool enabled = true);

/// Changes a range filter's bounds (re-resolving it) and moves it to the end.
void set_range(FilterQueue& queue, const ResolveContext& ctx, int id, double min, double max);

struct VisibilityState {
  CcSet visible;
  CcSet hidden;
  /// Per disabled filter: currently visible CCs that re-enabling it would hide.
  std::map<int, CcSet> affected_by_disabled;
  /// Union of all affected sets.
  CcSet affected;

  std::vector<int> filters_affecting(CcIndex cc) const;
};

/// Ordered pass over the enabled records: remove subtracts, remove_complement
/// and range intersect, add unions (clipped to the ensemble); afterwards the
/// union of all enabled fix subjects is added back.
CcSet evaluate_visible(const std::vector<FilterRecord>& records, std::size_t cc_count);

VisibilityState evaluate(const FilterQueue& queue);

enum class CellMark { normal, partially_affected, fully_affected };

std::string_view to_string(CellMark m);

/// Classifies an aggregated cell by how many of its supporting CCs are
/// affected by disabled filters.
CellMark classify_cell(const CcSet& support, const CcSet& affected);

/// Marks for every cell of a residue matrix, parallel to model.cells.
std::vector<CellMark> cell_marks(const ComplexEnsemble& ens, const ResidueMatrixModel& model,
                                 const CcSet& visible, const CcSet& affected);

struct ProteinViewMarks {
  std::vector<CellMark> totals;                 // per primary residue
  std::vector<std::vector<CellMark>> partners;  // parallel to model.partners
};

ProteinViewMarks cell_marks(const ComplexEnsemble& ens, const ProteinViewModel& model,
                            const CcSet& visible, const CcSet& affected);

}  // namespace dockscope
