#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"
#include "knotforge/invariants.hpp"

namespace knotforge::workbench {

enum class Shape { kA, kB };

/// Crossing caps used throughout the census. The values are structural:
/// no strand pair may cross more than three times, the single twist box of
/// shape A holds at most 3 crossings, the two boxes of shape B at most 6,
/// a quadruple-point pattern resolves into at most 6 crossings, and every
/// realization must reduce to at most 10 crossings.
struct CrossingBudget {
  int per_pair_max = 3;
  int shape_a_max = 3;
  int shape_b_max = 6;
  int pattern_max = 6;
  int reduced_total_max = 10;
};

using Matching = std::array<std::pair<int, int>, 4>;  // pairs of boundary slots 0..7

/// One of the 18 dihedral classes of ways four strands can pass through a
/// disk around the quadruple point (chords of 8 boundary points, crossings
/// given by interleaving). Ids are sorted by crossing count, so ids 1..14
/// have at most 3 crossings and ids 15..18 have 4, 4, 5 and 6.
struct PatternClass {
  int id = 0;
  Matching canonical;
  int crossings = 0;
  std::vector<Matching> placements;  // distinct matchings in the dihedral orbit
  /// Representative strand height rankings that induce distinct over/under
  /// assignments on the canonical matching's crossing pairs.
  std::vector<std::array<int, 4>> height_classes;
};

const std::vector<PatternClass>& pattern_catalog();

/// Height rankings inducing distinct over/under assignments for a specific
/// placement of a pattern.
std::vector<std::array<int, 4>> height_classes_for(const Matching& placement);

struct TemplateSpec {
  Shape shape = Shape::kA;
  std::vector<int> twist_counts;              // one per twist box
  int pattern = 1;                            // pattern_catalog id
  std::array<int, 4> height_order = {0, 1, 2, 3};  // rank per chord, larger = nearer
  void validate(const CrossingBudget& budget) const;
  int twist_total() const;
};

/// All (shape, twist_counts, pattern, height_order) tuples within budget;
/// deterministic and duplicate-free.
std::vector<TemplateSpec> enumerate_templates(const CrossingBudget& budget);

struct Realization {
  diagram::KnotDiagram diagram;
  Matching placement;
  int pattern_crossings = 0;
  int twist_crossings = 0;
};

/// Trace and realize a template with the given over/under bit per twist
/// crossing (bit 1: the descending strand passes over). The pattern is
/// placed on the canonical placement of its class unless that traces more
/// than one component and another placement does not. Throws NotAKnot when
/// every placement of the template traces more than one closed component.
Realization realize_diagram(const TemplateSpec& tpl, const std::vector<int>& crossing_signs);

struct Classification {
  diagram::KnotDiagram reduced;
  int crossing_count = 0;
  std::vector<invariants::KnotTableEntry> candidates;  // after the 2-bridge screen
  std::vector<std::string> raw_matches;                // every Alexander match
};

/// Reduce (R2 crescents, then curls, to a fixed point), enforce the reduced
/// crossing cap (BudgetExceeded otherwise), and identify. Candidates are
/// screened to knots that can still be 3-superbridge: 2-bridge, at most 9
/// crossings, and not a torus knot of superbridge index 4.
Classification reduce_and_classify(const diagram::KnotDiagram& d,
                                   const invariants::KnotTable& table,
                                   const CrossingBudget& budget);

struct CensusReport {
  std::map<std::string, std::uint64_t> types;  // singleton identifications
  std::uint64_t realizations = 0;
  std::uint64_t not_a_knot = 0;
  std::uint64_t unidentified = 0;   // empty, ambiguous or screened-out matches
  std::uint64_t ambiguous = 0;      // multi-candidate Alexander classes
  std::uint64_t screened_out = 0;   // matches removed by the 2-bridge screen
  std::uint64_t budget_exceeded = 0;
  int max_reduced_crossings = 0;
  int max_realized_crossings = 0;
  std::string to_json() const;
};

/// Full pipeline over all templates, placements and sign assignments.
/// Deterministic; the report is sorted by knot name.
CensusReport census(const CrossingBudget& budget, const invariants::KnotTable& table);

struct BoundRuleInput {
  std::string name;
  int bridge_index = 0;
  std::string marker;
  bool two_bridge = false;
  std::optional<std::pair<int, int>> torus;
  int edge_bound = 0;
};

BoundRuleInput bound_input_from_entry(const invariants::KnotTableEntry& e);

struct BoundResult {
  std::string name;
  int lo = 0, hi = 0;
  std::optional<int> exact;
};

/// Superbridge ranges from the published rules: upper bound floor(e/2)
/// capped at 7 for 2-bridge knots; lower bound bridge+1 for star/diamond
/// markers and bridge+2 for times/circ; torus entries pinned by min{2p,q}.
std::vector<BoundResult> table_bounds(const std::vector<BoundRuleInput>& inputs);

}  // namespace knotforge::workbench
